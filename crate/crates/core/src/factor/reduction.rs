use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FactorConfig, FactorError};
use crate::holofun::{Certificate, DiscFunction};
use crate::mat2::{MatFun, SpecialLinear};

const RANDOM_CONSTANTS: usize = 64;
const CONSTANT_RADIUS: f64 = 4.0;
const POLY_ATTEMPTS: usize = 256;
const POLY_COEFF_RADIUS: f64 = 2.0;
/// A certified candidate with `β` at most this ends the search.
pub const BETA_ACCEPT: f64 = 16.0;
/// Candidates handed on to the factorization, best `β` first.
pub const MAX_CANDIDATES: usize = 8;
/// Zeros of `c` closer than this are treated as a repeated zero.
const ROOT_SEPARATION: f64 = 1e-6;
const NEWTON_STEPS: usize = 8;
const BRANCH_SWEEPS: usize = 64;
/// Boundary samples used to score branch choices.
const BRANCH_GRID: usize = 1024;
/// Radii of the discs whose zeros of `c` the interpolated shift cancels.
const INTERPOLATION_RADII: [f64; 3] = [1.25, 1.1, 1.0];
const MAX_RESCALE_GROWTH: f64 = 1e8;
const LEVEL_STEPS: usize = 4;

/// Shear conjugation making the `(1,1)` entry a certified unit.
#[derive(Debug, Clone)]
pub struct ReductionRecord {
    pub h: DiscFunction,
    /// `E = [[1, h], [0, 1]]`.
    pub shear: MatFun,
    /// `E · A · E⁻¹`.
    pub reduced: MatFun,
    /// Unit certificate of the reduced `(1,1)` entry.
    pub certificate: Certificate,
    /// Candidates examined.
    pub attempts: usize,
}

/// Boundary sup of `(3 + |d|) / |a|`.
pub(crate) fn beta_sup(a: &DiscFunction, d: &DiscFunction, grid: usize) -> f64 {
    let av = a.boundary_values(grid);
    let dv = d.boundary_values(grid);
    av.iter()
        .zip(&dv)
        .map(|(a, d)| (3.0 + d.norm()) / a.norm())
        .fold(0.0, f64::max)
}

struct Candidate {
    h: DiscFunction,
    reduced: MatFun,
    certificate: Certificate,
    beta: f64,
}

fn conjugate_by_shear(m: &MatFun, h: &DiscFunction) -> MatFun {
    MatFun::upper_shear(h.clone())
        .mul(m)
        .mul(&MatFun::upper_shear(-h))
}

fn try_candidate(m: &MatFun, h: DiscFunction, grid: usize) -> Option<Candidate> {
    let first = &m.a + &(&h * &m.c);
    let certificate = first.certificate(grid).ok()?;
    if !certificate.is_unit() {
        return None;
    }
    let reduced = conjugate_by_shear(m, &h);
    let beta = beta_sup(&reduced.a, &reduced.d, certificate.grid_size);
    Some(Candidate {
        h,
        reduced,
        certificate,
        beta,
    })
}

/// Finds `h` with `a + h·c` a certified unit; the first of
/// [`reduction_candidates`].
pub fn unimodular_reduction(
    a: &SpecialLinear,
    cfg: &FactorConfig,
) -> Result<ReductionRecord, FactorError> {
    Ok(reduction_candidates(a, cfg)?.swap_remove(0))
}

/// Certified shears making `a + h·c` a unit, best `β = sup (3+|d|)/|a|`
/// first, at most [`MAX_CANDIDATES`] of them.
///
/// Phases, in order: `h = 0`; the constants `k·{1, −1, i, −i}` for
/// `k = 1…4` and 64 seeded random constants of modulus at most 4; 256
/// seeded random polynomials of degree at most 2; shifts interpolated at the
/// zeros of `c`. The search stops after the first phase that yields a
/// candidate with `β` at most [`BETA_ACCEPT`]. Small `β` matters because it
/// sets the scaling `δ` of the next step, and the rounding error of the
/// factors grows like `δ²`.
pub fn reduction_candidates(
    a: &SpecialLinear,
    cfg: &FactorConfig,
) -> Result<Vec<ReductionRecord>, FactorError> {
    let m = a.matrix();
    let order = m.order();
    let grid = cfg.grid;
    let mut pool = Vec::new();
    let mut attempts = 0;
    let mut consider = |pool: &mut Vec<Candidate>, h: Option<DiscFunction>| {
        attempts += 1;
        pool.extend(h.and_then(|h| try_candidate(m, h, grid)));
    };
    let done = |pool: &[Candidate]| pool.iter().any(|c| c.beta <= BETA_ACCEPT);

    consider(&mut pool, Some(DiscFunction::zero(order)));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if !done(&pool) {
        let units = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ];
        let mut constants: Vec<Complex64> = (1..=4)
            .flat_map(|k| units.iter().map(move |u| u * k as f64))
            .collect();
        constants.extend((0..RANDOM_CONSTANTS).map(|_| random_in_disc(&mut rng, CONSTANT_RADIUS)));
        for h in constants {
            consider(&mut pool, Some(DiscFunction::constant(h, order)));
        }
    }

    if !done(&pool) {
        for _ in 0..POLY_ATTEMPTS {
            let coeffs = (0..3)
                .map(|_| random_in_disc(&mut rng, POLY_COEFF_RADIUS))
                .collect();
            consider(&mut pool, Some(DiscFunction::new(coeffs, order)));
        }
    }

    if !done(&pool) {
        let trace_sup = m.trace().boundary_extrema(grid).1;
        for radius in INTERPOLATION_RADII {
            let Some(nodes) = InterpolationNodes::find(m, radius, grid) else {
                continue;
            };
            for target in nodes.targets(m, trace_sup, grid) {
                consider(&mut pool, nodes.shift(m, &target, grid));
            }
        }
    }

    pool.sort_by(|x, y| x.beta.total_cmp(&y.beta));
    if pool.is_empty() {
        return Err(FactorError::ReductionFailed { attempts });
    }
    pool.dedup_by(|x, y| (x.beta - y.beta).abs() <= 1e-12 * y.beta);
    pool.truncate(MAX_CANDIDATES);
    Ok(pool.into_iter().map(|c| finish(c, attempts)).collect())
}

/// Zeros of `c` in the disc of radius `radius` with the values of `log a`
/// there. Since `ad − bc = 1`, `a` has no zero where `c` vanishes.
struct InterpolationNodes {
    roots: Vec<Complex64>,
    logs: Vec<Complex64>,
    radius: f64,
    gram: DMatrix<Complex64>,
}

impl InterpolationNodes {
    fn find(m: &MatFun, radius: f64, grid: usize) -> Option<Self> {
        let scaled_c = m.c.dilate(radius, MAX_RESCALE_GROWTH)?;
        let cert = scaled_c.certificate(grid).ok()?;
        let count = usize::try_from(cert.winding?).ok()?;
        let roots: Vec<Complex64> = zeros_in_disc(&scaled_c, count, cert.grid_size)?
            .into_iter()
            .map(|w| polish(&m.c, w * radius))
            .collect();
        let logs = roots.iter().map(|&z| m.a.horner(z).ln()).collect();
        let mut nodes = InterpolationNodes {
            roots,
            logs,
            radius,
            gram: DMatrix::zeros(count, count),
        };
        nodes.gram = DMatrix::from_fn(count, count, |i, j| {
            nodes.kernel(nodes.roots[j], nodes.roots[i])
        });
        Some(nodes)
    }

    /// Szegő kernel of the disc of radius `radius`.
    fn kernel(&self, node: Complex64, z: Complex64) -> Complex64 {
        1.0 / (self.radius * self.radius - node.conj() * z)
    }

    /// Targets for `log a'`: the constant 0 and, for each level `L` on a
    /// ladder above `log(3 + sup |trace|)`, the outer function with boundary
    /// modulus `sqrt(|a|² + e^{2L})`. The latter follows `a` where it is
    /// large and keeps `|a'|` near `e^L` where `a` is small, so `|d'|/|a'|`
    /// stays moderate.
    fn targets(&self, m: &MatFun, trace_sup: f64, grid: usize) -> Vec<DiscFunction> {
        let order = m.order();
        let mut targets = vec![DiscFunction::zero(order)];
        let base = (3.0 + trace_sup).ln();
        let av = m.a.boundary_values(grid);
        for k in 0..LEVEL_STEPS {
            let floor = (2.0 * (base + k as f64)).exp();
            let target = outer_log(&av, floor, order);
            if self.reaches_nodes(&target) {
                targets.push(target);
            }
        }
        targets
    }

    /// Whether the Taylor series of `f` can be trusted out to `radius`.
    fn reaches_nodes(&self, f: &DiscFunction) -> bool {
        let peak = f.max_coeff_modulus();
        f.coeffs()
            .iter()
            .enumerate()
            .all(|(k, c)| c.norm() * self.radius.powi(k as i32) <= MAX_RESCALE_GROWTH.sqrt() * peak)
    }

    /// Coordinate descent over the branches of `log a` at the nodes on
    /// the boundary sup of `(3 + |T − a'|)/|a'|` for `a' = exp(g)`, which
    /// is the `β` the candidate will have.
    fn sharpen_branches(
        &self,
        m: &MatFun,
        target: &DiscFunction,
        logs: Vec<Complex64>,
        grid: usize,
    ) -> Option<Vec<Complex64>> {
        let n = logs.len();
        if n == 0 {
            return Some(logs);
        }
        let grid = grid.min(BRANCH_GRID);
        let inv = self.gram.clone().try_inverse()?;
        let points: Vec<Complex64> = (0..grid)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / grid as f64))
            .collect();
        let kz = DMatrix::from_fn(grid, n, |j, i| self.kernel(self.roots[i], points[j]));
        let turn = Complex64::new(0.0, TAU);
        let columns = &kz * &inv * turn;
        let tv = target.boundary_values(grid);
        let trace = m.trace().boundary_values(grid);
        let mut values = DVector::from_vec(logs);
        let mut g = &kz * (&inv * &values);
        for (gj, t) in g.iter_mut().zip(&tv) {
            *gj += t;
        }
        let beta = |g: &DVector<Complex64>| {
            g.iter()
                .zip(&trace)
                .map(|(g, t)| {
                    let e = g.exp();
                    (3.0 + (t - e).norm()) / e.norm()
                })
                .fold(0.0, f64::max)
        };
        let mut best = beta(&g);
        for _ in 0..BRANCH_SWEEPS {
            let mut improved = false;
            for i in 0..n {
                for sign in [1.0, -1.0] {
                    let trial = &g + columns.column(i) * Complex64::new(sign, 0.0);
                    let b = beta(&trial);
                    if b < best * (1.0 - 1e-9) {
                        best = b;
                        g = trial;
                        values[i] += turn * sign;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        Some(values.iter().copied().collect())
    }

    /// `h = (exp(g) − a)/c` with `g = target + δg`, where `δg` is the
    /// minimal-norm interpolant in the Hardy space of the disc of radius
    /// `radius` of `log a − target` at the nodes, with the branches of
    /// `log a` chosen to shrink the norm. Then `a + hc = exp(g)` is a unit.
    /// A radius above 1 also cancels the zeros of `c` just outside the
    /// circle, which would otherwise be poles of `h` near the boundary.
    fn shift(&self, m: &MatFun, target: &DiscFunction, grid: usize) -> Option<DiscFunction> {
        let defects = self
            .roots
            .iter()
            .zip(&self.logs)
            .map(|(&z, l)| l - target.horner(z))
            .collect();
        let logs = minimal_branch_logs(&self.gram, defects)?;
        let logs = self.sharpen_branches(m, target, logs, grid)?;
        let weights = self.gram.clone().lu().solve(&DVector::from_vec(logs))?;
        let av = m.a.boundary_values(grid);
        let cv = m.c.boundary_values(grid);
        let tv = target.boundary_values(grid);
        let hv: Vec<Complex64> = (0..grid)
            .map(|j| {
                let z = Complex64::from_polar(1.0, TAU * j as f64 / grid as f64);
                let correction: Complex64 = self
                    .roots
                    .iter()
                    .zip(weights.iter())
                    .map(|(&r, w)| w * self.kernel(r, z))
                    .sum();
                ((tv[j] + correction).exp() - av[j]) / cv[j]
            })
            .collect();
        hv.iter()
            .all(|v| v.is_finite())
            .then(|| DiscFunction::from_boundary_samples(&hv, m.order()))
    }
}

/// Holomorphic `G` with `Re G = ½ log(|a|² + floor)` on the circle, from
/// the boundary samples of `a`: the analytic part of the Fourier series.
fn outer_log(a_samples: &[Complex64], floor: f64, order: usize) -> DiscFunction {
    let modulus: Vec<Complex64> = a_samples
        .iter()
        .map(|a| Complex64::new(0.5 * (a.norm_sqr() + floor).ln(), 0.0))
        .collect();
    let fourier = DiscFunction::from_boundary_samples(&modulus, order);
    let coeffs = fourier
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| if k == 0 { c } else { c * 2.0 })
        .collect();
    DiscFunction::new(coeffs, order)
}

/// `L + 2πi k` for the integer shifts `k` found by coordinate descent on
/// the Hardy norm `(L + 2πi k)* K⁻¹ (L + 2πi k)`.
fn minimal_branch_logs(gram: &DMatrix<Complex64>, logs: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = logs.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let inv = gram.clone().try_inverse()?;
    let norm = |v: &DVector<Complex64>| (v.adjoint() * &inv * v)[(0, 0)].re;
    let mut values = DVector::from_vec(logs);
    let mut best = norm(&values);
    let turn = Complex64::new(0.0, TAU);
    for _ in 0..BRANCH_SWEEPS {
        let mut improved = false;
        for j in 0..n {
            for step in [turn, -turn] {
                values[j] += step;
                let trial = norm(&values);
                if trial < best - 1e-12 * best.abs() {
                    best = trial;
                    improved = true;
                } else {
                    values[j] -= step;
                }
            }
        }
        if !improved {
            break;
        }
    }
    values
        .iter()
        .all(|w| w.is_finite())
        .then(|| values.iter().copied().collect())
}

/// Simple zeros of `f` in the open unit disc, `count` of them by the
/// argument principle. Power sums come from boundary quadrature of
/// `z^k f'/f`; the roots of the monic polynomial they define are the
/// eigenvalues of its companion matrix, polished by Newton steps on `f`.
fn zeros_in_disc(f: &DiscFunction, count: usize, grid: usize) -> Option<Vec<Complex64>> {
    if count == 0 {
        return Some(Vec::new());
    }
    let fv = f.boundary_values(grid);
    let dv = f.derivative().boundary_values(grid);
    let omega = |j: usize| Complex64::from_polar(1.0, TAU * (j % grid) as f64 / grid as f64);
    let ratio: Vec<Complex64> = (0..grid).map(|j| omega(j) * dv[j] / fv[j]).collect();
    let power_sums: Vec<Complex64> = (1..=count)
        .map(|k| {
            ratio
                .iter()
                .enumerate()
                .map(|(j, r)| r * omega(j * k))
                .sum::<Complex64>()
                / grid as f64
        })
        .collect();

    // Newton identities: k e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} s_i.
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for k in 1..=count {
        let acc: Complex64 = (1..=k)
            .map(|i| {
                let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                e[k - i] * power_sums[i - 1] * sign
            })
            .sum();
        e.push(acc / k as f64);
    }
    // z^n + q_1 z^{n−1} + … + q_n with q_k = (−1)^k e_k.
    let companion = DMatrix::from_fn(count, count, |i, j| {
        if i == 0 {
            let ek = e[j + 1];
            if j % 2 == 0 {
                ek
            } else {
                -ek
            }
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::default()
        }
    });
    let roots: Vec<Complex64> = companion
        .schur()
        .eigenvalues()?
        .iter()
        .map(|&r| polish(f, r))
        .collect();
    let separated = roots.iter().enumerate().all(|(i, x)| {
        roots[i + 1..]
            .iter()
            .all(|y| (x - y).norm() > ROOT_SEPARATION)
    });
    let inside = roots.iter().all(|r| r.norm() < 1.0);
    (separated && inside).then_some(roots)
}

fn polish(f: &DiscFunction, mut z: Complex64) -> Complex64 {
    let df = f.derivative();
    for _ in 0..NEWTON_STEPS {
        let d = df.horner(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = f.horner(z) / d;
        z -= step;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

fn random_in_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn finish(c: Candidate, attempts: usize) -> ReductionRecord {
    ReductionRecord {
        shear: MatFun::upper_shear(c.h.clone()),
        h: c.h,
        reduced: c.reduced,
        certificate: c.certificate,
        attempts,
    }
}
