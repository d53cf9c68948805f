//! Semi-generalized hybrid relative pose with unknown focal length, depth
//! formulation in `a1..a4, b11, f`.
//!
//! With `Y_ij = a_i p_i - a_j p_j`, `X_1 = b11 q11` and `K^-2 =
//! diag(f^-2, f^-2, 1)`, the equations are `Y_ij' K^-2 Y_kl = X_ij' X_kl`
//! over the six pairs `ij`: six norm equations (`ij = kl`) and fifteen
//! cross equations. The 20-polynomial variant drops the last cross pair.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::triangulation::{add_term, mul_terms, random_rotation, Terms};
use crate::field::{Field, PrimeField, Reals};
use crate::laurent::{Coefficient, LaurentPoly, LaurentSystem, Monomial};

pub const VARIABLES: [&str; 6] = ["a1", "a2", "a3", "a4", "b11", "f"];
const ARITY: usize = 6;
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Image points `p_j = (u, v, 1)`, the ray `q11`, and the known points
/// `X_2..X_4`.
#[derive(Debug, Clone, PartialEq)]
pub struct H13fData<E> {
    pub images: [[E; 2]; 4],
    pub ray: [E; 3],
    pub points: [[E; 3]; 3],
}

fn var(v: usize, e: i32) -> Monomial {
    Monomial::var(ARITY, v, e).expect("small exponent")
}

/// All 21 equations when `polys` is 21, the first 20 when it is 20.
pub fn h13f_system<F>(field: &F, data: &H13fData<F::Elem>, polys: usize) -> LaurentSystem<F::Elem>
where
    F: Field,
    F::Elem: Coefficient,
{
    assert!(polys == 20 || polys == 21, "h13f has 20 or 21 polynomials");
    let one = Monomial::one(ARITY);
    let image = |j: usize, c: usize| if c == 2 { field.one() } else { data.images[j][c] };
    let y: Vec<[Terms<F::Elem>; 3]> = PAIRS
        .iter()
        .map(|&(i, j)| {
            std::array::from_fn(|c| {
                let mut t = Terms::new();
                add_term(field, &mut t, var(i, 1), image(i, c));
                add_term(field, &mut t, var(j, 1), field.neg(image(j, c)));
                t
            })
        })
        .collect();
    let x: Vec<[Terms<F::Elem>; 3]> = PAIRS
        .iter()
        .map(|&(i, j)| {
            std::array::from_fn(|c| {
                let mut t = Terms::new();
                for (k, sign) in [(i, false), (j, true)] {
                    let (m, v) = match k {
                        0 => (var(4, 1), data.ray[c]),
                        _ => (one.clone(), data.points[k - 1][c]),
                    };
                    add_term(field, &mut t, m, if sign { field.neg(v) } else { v });
                }
                t
            })
        })
        .collect();
    let inv_f2 = var(5, -2);
    let equation = |k: usize, l: usize| {
        let mut acc = Terms::new();
        for c in 0..3 {
            for (m, v) in mul_terms(field, &y[k][c], &y[l][c]) {
                let m = if c < 2 { &m * &inv_f2 } else { m };
                add_term(field, &mut acc, m, v);
            }
            for (m, v) in mul_terms(field, &x[k][c], &x[l][c]) {
                add_term(field, &mut acc, m, field.neg(v));
            }
        }
        LaurentPoly::new(ARITY, acc.into_iter().collect()).expect("distinct monomials")
    };
    let mut out: Vec<_> = (0..PAIRS.len()).map(|k| equation(k, k)).collect();
    for k in 0..PAIRS.len() {
        for l in k + 1..PAIRS.len() {
            out.push(equation(k, l));
        }
    }
    out.truncate(polys);
    LaurentSystem::new(ARITY, out).expect("six variables")
}

pub fn random_data_gf(field: PrimeField, seed: u64) -> H13fData<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = field.modulus();
    let mut draw = || rng.gen_range(1..p);
    H13fData {
        images: std::array::from_fn(|_| std::array::from_fn(|_| draw())),
        ray: std::array::from_fn(|_| draw()),
        points: std::array::from_fn(|_| std::array::from_fn(|_| draw())),
    }
}

/// A noise-free synthetic instance with its true solution
/// `(a1, a2, a3, a4, b11, f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct H13fScene {
    pub data: H13fData<f64>,
    pub truth: [f64; 6],
}

/// Focal length in `[0.5, 2]` in normalized image units, points at depth
/// `[2, 4]` in front of the pinhole camera, random pose.
pub fn synth_h13f_scene(seed: u64) -> H13fScene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f: f64 = rng.gen_range(0.5..2.0);
    let r = random_rotation(&mut rng);
    let t = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let local: [Vector3<f64>; 4] = std::array::from_fn(|_| {
        let depth = rng.gen_range(2.0..4.0);
        Vector3::new(rng.gen_range(-0.5..0.5) * depth, rng.gen_range(-0.5..0.5) * depth, depth)
    });
    let world: [Vector3<f64>; 4] = std::array::from_fn(|j| r * local[j] + t);
    let beta = world[0].norm();
    let ray = world[0] / beta;
    H13fScene {
        data: H13fData {
            images: std::array::from_fn(|j| [f * local[j].x / local[j].z, f * local[j].y / local[j].z]),
            ray: [ray.x, ray.y, ray.z],
            points: std::array::from_fn(|j| [world[j + 1].x, world[j + 1].y, world[j + 1].z]),
        },
        truth: [local[0].z, local[1].z, local[2].z, local[3].z, beta, f],
    }
}

impl H13fScene {
    pub fn system(&self, polys: usize) -> LaurentSystem<f64> {
        h13f_system(&Reals, &self.data, polys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let f = PrimeField::default();
        let d = random_data_gf(f, 3);
        let full = h13f_system(&f, &d, 21);
        assert_eq!(full.len(), 21);
        let short = h13f_system(&f, &d, 20);
        assert_eq!(short.polys(), &full.polys()[..20]);
        // a norm equation: a_i^2, a_i a_j, a_j^2 with and without f^-2, b11^2, b11, 1
        assert_eq!(full.polys()[0].len(), 9);
    }

    #[test]
    fn truth_is_a_root() {
        for seed in 0..20 {
            let s = synth_h13f_scene(seed);
            for g in s.system(21).polys() {
                let v = g.eval(&Reals, &s.truth).unwrap();
                let scale: f64 = g.terms().iter().map(|(_, c)| c.abs()).sum();
                assert!(v.abs() < 1e-10 * scale, "seed {seed}: {v}");
            }
        }
    }
}
