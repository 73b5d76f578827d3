//! Seeded instance generation shared by tests, benchmarks and the CLI.

use rand::Rng;

use crate::gabriel::Instance;
use crate::geom::Point;

/// `n` points uniform in the unit square.
pub fn random_points<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Point> {
    (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect()
}

/// `n` vertices and `w` witnesses, all uniform in the unit square.
///
/// # Panics
///
/// If `n == 0`.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, n: usize, w: usize) -> Instance {
    assert!(n > 0, "instances need at least one vertex");
    let vertices = random_points(rng, n);
    let witnesses = random_points(rng, w);
    Instance {
        vertices,
        witnesses,
        label: None,
    }
}
