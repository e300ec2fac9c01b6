//! Ground truth: the recurrence with principal coefficients evaluated by
//! memoized recursion, and the closed-form coefficient at a surface vertex.

use std::collections::HashMap;

use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, Var};
use crate::surface::{check_scope, coeff_i, coeff_j, Point3, Shadow, SteppedSurface, SurfaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    ScopeViolation(#[from] SurfaceError),
    #[error("neighbor heights around ({0},{1}) are not all k±1")]
    InvalidNeighborHeights(i32, i32),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// A surface with a target point inside the solvable scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    surface: SteppedSurface,
    point: Point3,
    shadow: Shadow,
}

impl Instance {
    pub fn new(surface: SteppedSurface, point: Point3) -> Result<Self, SurfaceError> {
        let shadow = check_scope(&surface, point)?;
        Ok(Instance { surface, point, shadow })
    }

    pub fn surface(&self) -> &SteppedSurface {
        &self.surface
    }

    pub fn point(&self) -> Point3 {
        self.point
    }

    pub fn shadow(&self) -> &Shadow {
        &self.shadow
    }

    /// The single initial value returned when the point lies on the surface.
    pub fn apex_value(&self) -> LaurentPoly {
        LaurentPoly::var(Var::t(self.point.i, self.point.j))
    }
}

/// Memoized evaluator of `T(i,j,k)` in terms of the data on one surface.
///
/// Cells above the surface recurse downward, cells below recurse upward;
/// either way the recursion only visits cells between the cell and the
/// surface.
pub struct Recurrence<'a> {
    surface: &'a SteppedSurface,
    memo: HashMap<(i32, i32, i32), LaurentPoly>,
}

impl<'a> Recurrence<'a> {
    pub fn new(surface: &'a SteppedSurface) -> Self {
        Recurrence { surface, memo: HashMap::new() }
    }

    pub fn value(&mut self, i: i32, j: i32, k: i32) -> Result<LaurentPoly, LaurentError> {
        if let Some(v) = self.memo.get(&(i, j, k)) {
            return Ok(v.clone());
        }
        let h = self.surface.height(i, j);
        let v = if k == h {
            LaurentPoly::var(Var::t(i, j))
        } else {
            // Centre of the octahedron one step toward the surface.
            let s = if k > h { -1 } else { 1 };
            let m = k + s;
            let horizontal = &self.value(i - 1, j, m)? * &self.value(i + 1, j, m)?;
            let vertical = &self.value(i, j - 1, m)? * &self.value(i, j + 1, m)?;
            let num = &(&coeff_j(i, j, m) * &horizontal) + &(&coeff_i(i, j, m) * &vertical);
            num.exact_div(&self.value(i, j, m + s)?)?
        };
        self.memo.insert((i, j, k), v.clone());
        Ok(v)
    }

    /// Every memoized cell, for invariant checks.
    pub fn cells(&self) -> impl Iterator<Item = (&(i32, i32, i32), &LaurentPoly)> {
        self.memo.iter()
    }
}

pub fn solve_oracle(inst: &Instance) -> Result<LaurentPoly, OracleError> {
    let p = inst.point();
    Ok(Recurrence::new(inst.surface()).value(p.i, p.j, p.k)?)
}

/// The coefficient attached to the vertex `(i,j)` of the surface quiver.
pub fn coefficient_at_vertex(s: &SteppedSurface, i: i32, j: i32) -> Result<LaurentPoly, OracleError> {
    let k = s.height(i, j);
    let eps = |a: i32, b: i32| s.height(a, b) - k;
    let (e1, e2, e3, e4) = (eps(i, j - 1), eps(i, j + 1), eps(i - 1, j), eps(i + 1, j));
    if [e1, e2, e3, e4].iter().any(|e| e.abs() != 1) {
        return Err(OracleError::InvalidNeighborHeights(i, j));
    }
    let pos = |e: i32, m: LaurentPoly| if e > 0 { m } else { LaurentPoly::one() };
    let num = [
        coeff_i(i, j, k - 1),
        pos(e1, coeff_j(i, j - 1, k)),
        pos(e2, coeff_j(i, j + 1, k)),
    ];
    let den = [
        coeff_j(i, j, k - 1),
        pos(e3, coeff_i(i - 1, j, k)),
        pos(e4, coeff_i(i + 1, j, k)),
    ];
    let num: LaurentPoly = num.into_iter().product();
    let den: LaurentPoly = den.into_iter().product();
    Ok(num.exact_div(&den)?)
}

/// The second closed form of the same coefficient, written through the
/// monomials at height `k+1` and the opposite signs of the offsets.
pub fn coefficient_at_vertex_upper(s: &SteppedSurface, i: i32, j: i32) -> Result<LaurentPoly, OracleError> {
    let k = s.height(i, j);
    let eps = |a: i32, b: i32| s.height(a, b) - k;
    let (e1, e2, e3, e4) = (eps(i, j - 1), eps(i, j + 1), eps(i - 1, j), eps(i + 1, j));
    if [e1, e2, e3, e4].iter().any(|e| e.abs() != 1) {
        return Err(OracleError::InvalidNeighborHeights(i, j));
    }
    let neg = |e: i32, m: LaurentPoly| if e < 0 { m } else { LaurentPoly::one() };
    let num: LaurentPoly = [
        coeff_j(i, j, k + 1),
        neg(e3, coeff_i(i - 1, j, k)),
        neg(e4, coeff_i(i + 1, j, k)),
    ]
    .into_iter()
    .product();
    let den: LaurentPoly = [
        coeff_i(i, j, k + 1),
        neg(e1, coeff_j(i, j - 1, k)),
        neg(e2, coeff_j(i, j + 1, k)),
    ]
    .into_iter()
    .product();
    Ok(num.exact_div(&den)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(i: i32, j: i32, k: i32) -> Point3 {
        Point3::new(i, j, k).unwrap()
    }

    #[test]
    fn one_step_over_fund() {
        let inst = Instance::new(SteppedSurface::fund(), pt(0, 0, 1)).unwrap();
        let t = solve_oracle(&inst).unwrap();
        let expected: LaurentPoly =
            "c[0,0]*t[-1,0]*t[0,0]^-1*t[1,0] + t[0,-1]*t[0,0]^-1*t[0,1]".parse().unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn point_on_surface_is_its_initial_value() {
        let inst = Instance::new(SteppedSurface::fund(), pt(3, 0, 0)).unwrap();
        assert_eq!(solve_oracle(&inst).unwrap(), LaurentPoly::var(Var::t(3, 0)));
    }

    #[test]
    fn diamond_term_counts() {
        // The shadow of (1,0,2) is the order-2 diamond, that of (0,0,3) the order-3 one.
        for (p, n) in [(pt(1, 0, 2), 8), (pt(0, 0, 3), 64)] {
            let t = solve_oracle(&Instance::new(SteppedSurface::fund(), p).unwrap()).unwrap();
            assert_eq!(t.len(), n);
            assert_eq!(t.eval_all_one(), n.into());
        }
    }

    #[test]
    fn out_of_scope_is_refused() {
        assert!(Instance::new(SteppedSurface::fund(), pt(0, 0, -3)).is_err());
    }

    #[test]
    fn fund_coefficients_are_principal() {
        let f = SteppedSurface::fund();
        for (i, j) in [(0, 0), (1, 1), (-2, 4), (3, -1)] {
            assert_eq!(coefficient_at_vertex(&f, i, j).unwrap(), LaurentPoly::var(Var::c(i, j)));
        }
    }

    #[test]
    fn mixed_neighbor_example() {
        // up and left one higher, right and down one lower.
        let s = SteppedSurface::grafted(pt(0, 0, 5), |i, j| 1 - i + j).unwrap();
        let (i, j) = (0, 0);
        let k = s.height(i, j);
        assert_eq!(s.height(i, j + 1), k + 1);
        assert_eq!(s.height(i - 1, j), k + 1);
        assert_eq!(s.height(i + 1, j), k - 1);
        assert_eq!(s.height(i, j - 1), k - 1);
        let expected = (&coeff_i(i, j, k - 1) * &coeff_j(i, j + 1, k))
            .exact_div(&(&coeff_j(i, j, k - 1) * &coeff_i(i - 1, j, k)))
            .unwrap();
        assert_eq!(coefficient_at_vertex(&s, i, j).unwrap(), expected);
    }
}
