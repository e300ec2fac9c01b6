//! The fixed instance suite used by the acceptance checks and the CLI.
//!
//! Random surfaces come from a seeded ChaCha stream, so the suite is the
//! same on every run and every machine.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::Instance;
use crate::surface::{upward_mutable_sites, Point3, Site, SteppedSurface, SurfaceError};

pub const SUITE_SEED: u64 = 0x7_5e_5e_ed;

/// The point of every randomly mutated suite surface.
pub const MUTATION_POINT: (i32, i32, i32) = (0, 0, 3);

#[derive(Clone, Debug)]
pub struct SuiteInstance {
    pub name: String,
    pub instance: Instance,
}

fn point(i: i32, j: i32, k: i32) -> Point3 {
    Point3::new(i, j, k).expect("suite points are on the odd lattice")
}

/// The surface `|i+j| - 1` under the cone of `(0,0,3)`, with that point.
pub fn mixed_neighbor_instance() -> Result<Instance, SurfaceError> {
    let p = point(0, 0, 3);
    Instance::new(SteppedSurface::grafted(p, |i, j| (i + j).abs() - 1)?, p)
}

/// Fund raised at 1 to 3 sites of the shadow of `p`, one at a time, each
/// move drawn from the sites that are still valid.
pub fn random_mutation(rng: &mut impl Rng, p: Point3) -> (SteppedSurface, Vec<Site>) {
    let mut s = SteppedSurface::fund();
    let mut moves = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let Some(&(i, j)) = upward_mutable_sites(&s, p).choose(rng) else {
            break;
        };
        s = s.mutate(i, j).expect("candidate sites are mutable");
        moves.push((i, j));
    }
    (s, moves)
}

/// Fund at `k0 = 1, 3, 5`, the mixed-neighbour instance, and five
/// randomly raised surfaces.
pub fn acceptance_suite() -> Result<Vec<SuiteInstance>, SurfaceError> {
    let mut out = Vec::new();
    for k in [1, 3, 5] {
        let p = point(0, 0, k);
        out.push(SuiteInstance { name: format!("fund {p}"), instance: Instance::new(SteppedSurface::fund(), p)? });
    }
    out.push(SuiteInstance { name: "|i+j|-1 (0,0,3)".into(), instance: mixed_neighbor_instance()? });
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let (i, j, k) = MUTATION_POINT;
    let p = point(i, j, k);
    for n in 0..5 {
        let (s, moves) = random_mutation(&mut rng, p);
        let moves: Vec<String> = moves.iter().map(|(i, j)| format!("({i},{j})")).collect();
        out.push(SuiteInstance { name: format!("raised#{n} {} {p}", moves.join("")), instance: Instance::new(s, p)? });
    }
    Ok(out)
}
