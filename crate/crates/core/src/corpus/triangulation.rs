//! Optimal 3-view triangulation: stationarity conditions of the reprojection
//! cost in the frame where the third rows of the cameras are `(1,0,0,0)`,
//! `(0,1,0,0)` and `(0,0,0,1)`, plus the synthetic scene protocol.

use std::collections::HashMap;

use nalgebra::{Matrix3, Matrix3x4, Matrix4, Quaternion, UnitQuaternion, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, PrimeField, Reals};
use crate::laurent::{Coefficient, LaurentPoly, LaurentSystem, Monomial};

pub const FOCAL: f64 = 1000.0;
pub const PRINCIPAL: f64 = 500.0;
const MAX_RESAMPLES: usize = 1000;
const FRAME_TOLERANCE: f64 = 1e-12;
const MIN_DEPTH: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error("camera {0} is not in the canonical frame")]
    Frame(usize),
}

/// The image plane rows `P_i^3` of the canonical frame.
pub fn canonical_third_rows() -> [Vector4<f64>; 3] {
    [Vector4::new(1.0, 0.0, 0.0, 0.0), Vector4::new(0.0, 1.0, 0.0, 0.0), Vector4::new(0.0, 0.0, 0.0, 1.0)]
}

/// Data of one triangulation instance: the first two rows of each camera and
/// the image point, in any field.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangulationData<E> {
    pub rows: [[[E; 4]; 2]; 3],
    pub points: [[E; 2]; 3],
}

pub(crate) type Terms<E> = HashMap<Monomial, E>;

pub(crate) fn add_term<F: Field>(field: &F, acc: &mut Terms<F::Elem>, m: Monomial, c: F::Elem) {
    let slot = acc.entry(m).or_insert_with(|| field.zero());
    *slot = field.add(*slot, c);
}

pub(crate) fn mul_terms<F: Field>(field: &F, a: &Terms<F::Elem>, b: &Terms<F::Elem>) -> Terms<F::Elem> {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            add_term(field, &mut out, ma * mb, field.mul(*ca, *cb));
        }
    }
    out
}

fn derivative<F: Field>(field: &F, a: &Terms<F::Elem>, var: usize) -> Terms<F::Elem> {
    let mut out = Terms::new();
    for (m, c) in a {
        let e = m.exponents()[var] as i32;
        if e == 0 {
            continue;
        }
        let mut exps: Vec<i32> = m.exponents().iter().map(|&v| v as i32).collect();
        exps[var] -= 1;
        let dm = Monomial::new(&exps).expect("small exponent");
        add_term(field, &mut out, dm, field.mul(field.from_i64(e as i64), *c));
    }
    out
}

/// `∂C/∂x, ∂C/∂y, ∂C/∂z` (halved) of
/// `C = Σ_i (P_i^1 X / P_i^3 X - u_i)^2 + (P_i^2 X / P_i^3 X - v_i)^2`
/// with `X = (x, y, z, 1)`. The denominators `x`, `y`, `1` are monomials, so
/// each residual and the gradient are Laurent polynomials.
pub fn triangulation_system<F>(field: &F, data: &TriangulationData<F::Elem>) -> LaurentSystem<F::Elem>
where
    F: Field,
    F::Elem: Coefficient,
{
    let mono = |e: [i32; 3]| Monomial::new(&e).expect("small exponent");
    let numer = [mono([1, 0, 0]), mono([0, 1, 0]), mono([0, 0, 1]), mono([0, 0, 0])];
    let denom = [mono([-1, 0, 0]), mono([0, -1, 0]), mono([0, 0, 0])];
    let mut residuals = Vec::with_capacity(6);
    for (cam, inv) in denom.iter().enumerate() {
        for row in 0..2 {
            let mut r = Terms::new();
            for (n, &c) in numer.iter().zip(&data.rows[cam][row]) {
                add_term(field, &mut r, n * inv, c);
            }
            add_term(field, &mut r, mono([0, 0, 0]), field.neg(data.points[cam][row]));
            residuals.push(r);
        }
    }
    let polys = (0..3)
        .map(|var| {
            let mut g = Terms::new();
            for r in &residuals {
                for (m, c) in mul_terms(field, r, &derivative(field, r, var)) {
                    add_term(field, &mut g, m, c);
                }
            }
            LaurentPoly::new(3, g.into_iter().collect()).expect("distinct monomials")
        })
        .collect();
    LaurentSystem::new(3, polys).expect("three variables")
}

/// A random member of the family over GF(p), for template generation.
pub fn random_data_gf(field: PrimeField, seed: u64) -> TriangulationData<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = field.modulus();
    let mut draw = || rng.gen_range(1..p);
    TriangulationData {
        rows: std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| draw()))),
        points: std::array::from_fn(|_| std::array::from_fn(|_| draw())),
    }
}

/// Ground truth of a synthetic scene, both in world coordinates and in the
/// canonical frame used by the polynomial system.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub seed: u64,
    pub point: Vector3<f64>,
    pub cameras: [Matrix3x4<f64>; 3],
    /// Projections with third entry 1, in pixels.
    pub images: [Vector3<f64>; 3],
    /// Maps canonical homogeneous coordinates to world ones.
    pub frame: Matrix4<f64>,
    /// Cameras in the canonical frame after image normalization.
    pub canonical: [Matrix3x4<f64>; 3],
    /// Normalized image points.
    pub canonical_images: [Vector3<f64>; 3],
}

pub(crate) fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
    // uniform unit quaternion
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let tau = std::f64::consts::TAU;
    let q = Quaternion::new(
        (1.0 - u1).sqrt() * (tau * u2).sin(),
        (1.0 - u1).sqrt() * (tau * u2).cos(),
        u1.sqrt() * (tau * u3).sin(),
        u1.sqrt() * (tau * u3).cos(),
    );
    UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

fn random_unit_vector(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Image normalization `T`: pixels to roughly unit scale, applied to all
/// three views alike, so the minimizer of the cost does not move.
pub fn image_normalization() -> Matrix3<f64> {
    Matrix3::new(
        1.0 / FOCAL,
        0.0,
        -PRINCIPAL / FOCAL,
        0.0,
        1.0 / FOCAL,
        -PRINCIPAL / FOCAL,
        0.0,
        0.0,
        1.0,
    )
}

/// Point in the unit cube, camera centres on the unit sphere, random
/// rotations, focal length 1000 and principal point (500, 500). Scenes with
/// the point behind a camera are redrawn.
pub fn synth_triangulation_scene(seed: u64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = Matrix3::new(FOCAL, 0.0, PRINCIPAL, 0.0, FOCAL, PRINCIPAL, 0.0, 0.0, 1.0);
    for _ in 0..MAX_RESAMPLES {
        let point = Vector3::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let cameras: [Matrix3x4<f64>; 3] = std::array::from_fn(|_| {
            let r = random_rotation(&mut rng);
            let c = random_unit_vector(&mut rng);
            let mut rt = Matrix3x4::zeros();
            rt.fixed_view_mut::<3, 3>(0, 0).copy_from(&r);
            rt.set_column(3, &(-r * c));
            k * rt
        });
        let x = point.push(1.0);
        let depths: Vec<f64> = cameras.iter().map(|p| (p * x)[2]).collect();
        if depths.iter().any(|&d| d <= MIN_DEPTH) {
            continue;
        }
        let Some(frame) = canonical_frame(&cameras, &mut rng) else {
            continue;
        };
        let images: [Vector3<f64>; 3] = std::array::from_fn(|i| {
            let h = cameras[i] * x;
            h / h[2]
        });
        let t = image_normalization();
        let canonical: [Matrix3x4<f64>; 3] = std::array::from_fn(|i| t * cameras[i] * frame);
        let canonical_images: [Vector3<f64>; 3] = std::array::from_fn(|i| t * images[i]);
        return Scene {
            seed,
            point,
            cameras,
            images,
            frame,
            canonical,
            canonical_images,
        };
    }
    panic!("no valid scene for seed {seed}");
}

/// `H` with `P_i^3 H` equal to the canonical third rows: the inverse of the
/// matrix stacking `P_1^3, P_2^3, (n, 0), P_3^3` for a random direction `n`.
fn canonical_frame(cameras: &[Matrix3x4<f64>; 3], rng: &mut impl Rng) -> Option<Matrix4<f64>> {
    let n = random_unit_vector(rng);
    let mut q = Matrix4::zeros();
    q.set_row(0, &cameras[0].row(2));
    q.set_row(1, &cameras[1].row(2));
    q.set_row(2, &n.push(0.0).transpose());
    q.set_row(3, &cameras[2].row(2));
    let h = q.try_inverse()?;
    h.iter().all(|v| v.is_finite()).then_some(h)
}

impl Scene {
    pub fn data(&self) -> Result<TriangulationData<f64>, SceneError> {
        for (i, (p, want)) in self.canonical.iter().zip(canonical_third_rows()).enumerate() {
            if (p.row(2).transpose() - want).amax() > FRAME_TOLERANCE * p.amax().max(1.0) {
                return Err(SceneError::Frame(i));
            }
        }
        Ok(TriangulationData {
            rows: std::array::from_fn(|i| std::array::from_fn(|r| std::array::from_fn(|c| self.canonical[i][(r, c)]))),
            points: std::array::from_fn(|i| [self.canonical_images[i][0], self.canonical_images[i][1]]),
        })
    }

    pub fn system(&self) -> Result<LaurentSystem<f64>, SceneError> {
        Ok(triangulation_system(&Reals, &self.data()?))
    }

    /// The ground-truth point in canonical coordinates `(x, y, z)`.
    pub fn canonical_point(&self) -> Vector3<f64> {
        let h = self.frame.try_inverse().expect("invertible frame") * self.point.push(1.0);
        h.xyz() / h[3]
    }

    /// Reprojection cost of a canonical point, in normalized image units.
    pub fn cost(&self, p: &[f64]) -> f64 {
        let x = Vector4::new(p[0], p[1], p[2], 1.0);
        self.canonical
            .iter()
            .zip(&self.canonical_images)
            .map(|(cam, img)| {
                let h = cam * x;
                (h[0] / h[2] - img[0]).powi(2) + (h[1] / h[2] - img[1]).powi(2)
            })
            .sum()
    }

    /// World coordinates of a canonical point.
    pub fn to_world(&self, p: &[f64]) -> Vector3<f64> {
        let h = self.frame * Vector4::new(p[0], p[1], p[2], 1.0);
        h.xyz() / h[3]
    }

    /// Of the given real candidates, the one with the smallest cost, and its
    /// distance to the true point in world coordinates.
    pub fn placement_error<'a>(&self, candidates: impl IntoIterator<Item = &'a [f64]>) -> Option<f64> {
        candidates
            .into_iter()
            .filter(|p| p.iter().all(|v| v.is_finite()))
            .map(|p| (self.cost(p), p))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, p)| (self.to_world(p) - self.point).norm())
    }
}
