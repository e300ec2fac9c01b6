//! Stepped surfaces, shadows of a point, the scope check, and the `I`/`J`
//! coefficient monomials of the recurrence.
//!
//! A surface is the fundamental surface reshaped by an ordered list of cone
//! envelopes and then by finitely many explicit height overrides. Envelopes
//! are what make adjusted surfaces `min(k, proj_p)` and their reflections
//! representable, since those differ from `fund` at infinitely many sites.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{var_product, LaurentPoly, Var};

pub type Site = (i32, i32);

pub const NEIGHBOR_STEPS: [Site; 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("point ({0},{1},{2}) is not on the odd lattice: i+j+k must be odd")]
    PointParity(i32, i32, i32),
    #[error("height {2} at site ({0},{1}) breaks parity: i+j+k must be odd")]
    Parity(i32, i32, i32),
    #[error("heights at ({0},{1}) and ({2},{3}) differ by {4}, expected 1")]
    Adjacency(i32, i32, i32, i32, i32),
    #[error("site ({0},{1}) is not mutable: its four neighbors are not at one common height")]
    NotMutable(i32, i32),
    #[error("point {point} lies below the surface: scope requires k_0 ≥ k(i_0,j_0), but k({},{}) = {height}", .point.i, .point.j)]
    PointBelowSurface { point: Point3, height: i32 },
    #[error("surface height {height} at ({0},{1}) in the shadow of {point} is below fund: scope requires k(i,j) ≥ fund(i,j)", .site.0, .site.1)]
    BelowFund { point: Point3, site: Site, height: i32 },
    #[error("the shadow of {0} is unbounded on this surface")]
    UnboundedShadow(Point3),
    #[error("surface file: {0}")]
    Format(String),
}

/// A point `(i, j, k)` with `i + j + k` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point3 {
    pub i: i32,
    pub j: i32,
    pub k: i32,
}

impl Point3 {
    pub fn new(i: i32, j: i32, k: i32) -> Result<Self, SurfaceError> {
        if (i + j + k).rem_euclid(2) != 1 {
            return Err(SurfaceError::PointParity(i, j, k));
        }
        Ok(Point3 { i, j, k })
    }

    pub fn site(&self) -> Site {
        (self.i, self.j)
    }

    pub fn dist(&self, (i, j): Site) -> i32 {
        (i - self.i).abs() + (j - self.j).abs()
    }

    /// Image under the symmetry `i <-> j`, `k <-> -k-1`, followed by the unit
    /// shift `i -> i+1` that brings the point back to the odd lattice.
    pub fn reflect(&self) -> Point3 {
        Point3 { i: self.j + 1, j: self.i, k: -self.k - 1 }
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

pub fn fund_height(i: i32, j: i32) -> i32 {
    (i + j).rem_euclid(2) - 1
}

/// Height of the downward cone with apex `p`.
pub fn proj_height(p: Point3, i: i32, j: i32) -> i32 {
    p.k - p.dist((i, j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Envelope {
    /// Pointwise minimum with the downward cone from the apex.
    Below(Point3),
    /// Pointwise maximum with the upward cone from the apex.
    Above(Point3),
}

impl Envelope {
    fn apply(&self, h: i32, (i, j): Site) -> i32 {
        match *self {
            Envelope::Below(p) => h.min(proj_height(p, i, j)),
            Envelope::Above(p) => h.max(p.k + p.dist((i, j))),
        }
    }

    fn reflect(&self) -> Envelope {
        match *self {
            Envelope::Below(p) => Envelope::Above(p.reflect()),
            Envelope::Above(p) => Envelope::Below(p.reflect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteppedSurface {
    envelopes: Vec<Envelope>,
    overrides: BTreeMap<Site, i32>,
}

#[derive(Serialize, Deserialize)]
struct SurfaceFile {
    base: String,
    overrides: Vec<[i32; 3]>,
}

impl SteppedSurface {
    pub fn fund() -> Self {
        SteppedSurface { envelopes: Vec::new(), overrides: BTreeMap::new() }
    }

    /// Fund with explicit heights; validated eagerly.
    pub fn from_overrides(items: impl IntoIterator<Item = (i32, i32, i32)>) -> Result<Self, SurfaceError> {
        let mut s = SteppedSurface::fund();
        for (i, j, k) in items {
            if (i + j + k).rem_euclid(2) != 1 {
                return Err(SurfaceError::Parity(i, j, k));
            }
            s.set(i, j, k);
        }
        s.validate()?;
        Ok(s)
    }

    /// The surface `max(fund, min(f, proj_p))`: the part of `f` under the
    /// cone of `p`, glued into fund. `f` must itself be a stepped surface.
    pub fn grafted(p: Point3, f: impl Fn(i32, i32) -> i32) -> Result<Self, SurfaceError> {
        let r = p.k.max(0) + 2;
        let mut items = Vec::new();
        for i in p.i - r..=p.i + r {
            for j in p.j - r..=p.j + r {
                let h = fund_height(i, j).max(f(i, j).min(proj_height(p, i, j)));
                items.push((i, j, h));
            }
        }
        SteppedSurface::from_overrides(items)
    }

    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        let file: SurfaceFile =
            serde_json::from_str(text).map_err(|e| SurfaceError::Format(e.to_string()))?;
        if file.base != "fund" {
            return Err(SurfaceError::Format(format!("unknown base {:?}", file.base)));
        }
        SteppedSurface::from_overrides(file.overrides.into_iter().map(|[i, j, k]| (i, j, k)))
    }

    pub fn to_json(&self) -> Result<String, SurfaceError> {
        if !self.envelopes.is_empty() {
            return Err(SurfaceError::Format("cone envelopes have no file form".into()));
        }
        let file = SurfaceFile {
            base: "fund".into(),
            overrides: self.overrides.iter().map(|(&(i, j), &k)| [i, j, k]).collect(),
        };
        serde_json::to_string(&file).map_err(|e| SurfaceError::Format(e.to_string()))
    }

    pub fn is_fund(&self) -> bool {
        self.envelopes.is_empty() && self.overrides.is_empty()
    }

    pub fn overrides(&self) -> &BTreeMap<Site, i32> {
        &self.overrides
    }

    fn base_height(&self, i: i32, j: i32) -> i32 {
        self.envelopes.iter().fold(fund_height(i, j), |h, e| e.apply(h, (i, j)))
    }

    pub fn height(&self, i: i32, j: i32) -> i32 {
        self.overrides.get(&(i, j)).copied().unwrap_or_else(|| self.base_height(i, j))
    }

    pub fn height_at(&self, (i, j): Site) -> i32 {
        self.height(i, j)
    }

    fn set(&mut self, i: i32, j: i32, k: i32) {
        if k == self.base_height(i, j) {
            self.overrides.remove(&(i, j));
        } else {
            self.overrides.insert((i, j), k);
        }
    }

    /// Checks parity and unit steps on the override region and its rim.
    pub fn validate(&self) -> Result<(), SurfaceError> {
        for (&(i, j), &k) in &self.overrides {
            if (i + j + k).rem_euclid(2) != 1 {
                return Err(SurfaceError::Parity(i, j, k));
            }
            for (di, dj) in NEIGHBOR_STEPS {
                let (a, b) = (i + di, j + dj);
                let diff = (k - self.height(a, b)).abs();
                if diff != 1 {
                    return Err(SurfaceError::Adjacency(i, j, a, b, diff));
                }
            }
        }
        Ok(())
    }

    /// Flips the height at `(i, j)` through its four equal neighbors.
    pub fn mutate(&self, i: i32, j: i32) -> Result<Self, SurfaceError> {
        let k = self.height(i, j);
        let nb: Vec<i32> = NEIGHBOR_STEPS.iter().map(|(di, dj)| self.height(i + di, j + dj)).collect();
        if nb.iter().any(|&h| h != nb[0]) {
            return Err(SurfaceError::NotMutable(i, j));
        }
        let mut out = self.clone();
        out.set(i, j, 2 * nb[0] - k);
        out.validate()?;
        Ok(out)
    }

    pub fn is_mutable(&self, i: i32, j: i32) -> bool {
        let h = self.height(i + 1, j);
        NEIGHBOR_STEPS.iter().all(|(di, dj)| self.height(i + di, j + dj) == h)
    }

    /// The pointwise minimum with the cone of `p`.
    pub fn adjusted(&self, p: Point3) -> SteppedSurface {
        if self.envelopes.last() == Some(&Envelope::Below(p)) && self.overrides.is_empty() {
            return self.clone();
        }
        let mut out = SteppedSurface { envelopes: self.envelopes.clone(), overrides: BTreeMap::new() };
        out.envelopes.push(Envelope::Below(p));
        for (&(i, j), &k) in &self.overrides {
            out.set(i, j, k.min(proj_height(p, i, j)));
        }
        out
    }

    /// The image surface `(i,j) -> -s(j,i-1) - 1` and image point.
    ///
    /// The bare swap `k -> -k-1` lands on the even lattice, so the swap is
    /// composed with a unit shift in `i`. Fund is fixed, and applying the map
    /// twice translates everything by `(1,1)`. Variables follow the sites:
    /// `t[i,j]` of the image is `t[j,i-1]` of the original, same for `c`.
    pub fn reflect(&self, p: Point3) -> (SteppedSurface, Point3) {
        let s = SteppedSurface {
            envelopes: self.envelopes.iter().map(Envelope::reflect).collect(),
            overrides: self.overrides.iter().map(|(&(i, j), &k)| ((j + 1, i), -k - 1)).collect(),
        };
        (s, p.reflect())
    }
}

/// Closed faces (strictly inside the cone) and open faces around them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Shadow {
    pub interior: BTreeSet<Site>,
    pub boundary: BTreeSet<Site>,
}

impl Shadow {
    pub fn is_degenerate(&self) -> bool {
        self.interior.is_empty()
    }

    pub fn all_faces(&self) -> BTreeSet<Site> {
        self.interior.union(&self.boundary).copied().collect()
    }
}

pub fn shadow(s: &SteppedSurface, p: Point3) -> Result<Shadow, SurfaceError> {
    let h0 = s.height(p.i, p.j);
    if p.k < h0 {
        return Err(SurfaceError::PointBelowSurface { point: p, height: h0 });
    }
    if p.k == h0 {
        return Ok(Shadow { interior: BTreeSet::new(), boundary: [p.site()].into() });
    }
    // The region {dist < k0 - k} is star-shaped around the apex, so a flood
    // fill finds it. Past distance k0 + 1 it can only continue below fund.
    let inside = |x: Site| p.dist(x) < p.k - s.height_at(x);
    let limit = p.k.max(0) + 1;
    let mut interior = BTreeSet::from([p.site()]);
    let mut queue = VecDeque::from([p.site()]);
    while let Some((i, j)) = queue.pop_front() {
        for (di, dj) in NEIGHBOR_STEPS {
            let x = (i + di, j + dj);
            if !interior.contains(&x) && inside(x) {
                if p.dist(x) > limit {
                    return Err(SurfaceError::UnboundedShadow(p));
                }
                interior.insert(x);
                queue.push_back(x);
            }
        }
    }
    let boundary = interior
        .iter()
        .flat_map(|&(i, j)| NEIGHBOR_STEPS.iter().map(move |(di, dj)| (i + di, j + dj)))
        .filter(|x| !interior.contains(x))
        .collect();
    Ok(Shadow { interior, boundary })
}

/// Checks both scope conditions, naming the first one that fails.
pub fn check_scope(s: &SteppedSurface, p: Point3) -> Result<Shadow, SurfaceError> {
    let sh = shadow(s, p)?;
    for site in sh.interior.iter().chain(&sh.boundary) {
        let height = s.height_at(*site);
        if height < fund_height(site.0, site.1) {
            return Err(SurfaceError::BelowFund { point: p, site: *site, height });
        }
    }
    Ok(sh)
}

/// Closed faces of the shadow where raising the surface by 2 is a valid
/// mutation that keeps `p` in scope, in site order.
pub fn upward_mutable_sites(s: &SteppedSurface, p: Point3) -> Vec<Site> {
    let Ok(sh) = check_scope(s, p) else {
        return Vec::new();
    };
    sh.interior
        .into_iter()
        .filter(|&(i, j)| s.is_mutable(i, j) && s.height(i + 1, j) > s.height(i, j))
        .filter(|&(i, j)| s.mutate(i, j).is_ok_and(|m| in_scope(&m, p)))
        .collect()
}

pub fn in_scope(s: &SteppedSurface, p: Point3) -> bool {
    check_scope(s, p).is_ok()
}

/// `I_{i,j,k}`: the row segment `c[i+a,j]`, `a = k+1 ..= -(k+1)`, for `k < 0`.
pub fn coeff_i(i: i32, j: i32, k: i32) -> LaurentPoly {
    if k >= 0 {
        return LaurentPoly::one();
    }
    var_product((k + 1..=-(k + 1)).map(|a| Var::c(i + a, j)))
}

/// `J_{i,j,k}`: the column segment `c[i,j+a]`, `a = -k ..= k`, for `k ≥ 0`.
pub fn coeff_j(i: i32, j: i32, k: i32) -> LaurentPoly {
    if k < 0 {
        return LaurentPoly::one();
    }
    var_product((-k..=k).map(|a| Var::c(i, j + a)))
}
