//! Preconditioning of the generic branch.
//!
//! The reduction cancels the zeros of `c` by interpolation, which is well
//! conditioned only when no zero of `c` lies close to the circle where the
//! result is certified. Random polynomial entries put their zeros near
//! `|z| = 1`, so the generic branch first moves them: a constant lower shear
//! `L = [[1, 0], [g, 1]]` replaces `c` by `c + g(a − d) − g²b`, and a
//! dilation `A(R·w)` moves the certification circle to `|z| = R`. The pair
//! `(g, R)` is chosen so that the circle `|z| = R` sits in a wide annulus free
//! of zeros of the new `c`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FactorConfig;
use crate::holofun::DiscFunction;
use crate::mat2::MatFun;

/// Logarithmic spacing of the radii on which zeros are counted.
const LADDER_STEP: f64 = 0.005;
/// Ladder rungs below and above the unit circle.
const LADDER_RUNGS: i32 = 24;
/// Dilation radii considered; a radius above 1 also damps the truncation
/// error of the factors.
pub const MIN_DILATION: f64 = 1.02;
pub const MAX_DILATION: f64 = 1.1;
/// Largest coefficient growth accepted for a dilated input.
pub const DILATION_GROWTH: f64 = 1e4;
/// Boundary grid of the zero counts, raised to twice the coefficient count.
const LADDER_GRID: usize = 256;
const RANDOM_SHEARS: usize = 40;
const SHEAR_RADIUS: f64 = 3.0;
/// Plans handed to the factorization, widest annulus first.
pub const MAX_PLANS: usize = 4;

/// Constant lower shear and dilation applied before the reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plan {
    pub lower: Complex64,
    pub radius: f64,
    /// Logarithmic half-width of the zero-free annulus around `|z| = R`.
    pub gap: f64,
}

impl Plan {
    pub const IDENTITY: Plan = Plan {
        lower: Complex64::new(0.0, 0.0),
        radius: 1.0,
        gap: 0.0,
    };

    /// `L · A(R·w) · L⁻¹`, or `None` if the dilation is not trustworthy.
    pub fn apply(&self, m: &MatFun) -> Option<MatFun> {
        let dilated = m.dilate(self.radius, DILATION_GROWTH)?;
        Some(conjugate_lower(&dilated, self.lower))
    }

    /// Maps a factor of the preconditioned matrix back to one of `A`.
    pub fn undo(&self, x: &MatFun) -> MatFun {
        let unsheared = conjugate_lower(x, -self.lower);
        unsheared
            .dilate(1.0 / self.radius, 1.0)
            .expect("contractions always succeed")
    }
}

fn conjugate_lower(m: &MatFun, g: Complex64) -> MatFun {
    if g == Complex64::default() {
        return m.clone();
    }
    let order = m.order();
    MatFun::lower_shear(DiscFunction::constant(g, order))
        .mul(m)
        .mul(&MatFun::lower_shear(DiscFunction::constant(-g, order)))
}

/// Zero counts of `f` inside the circles `|z| = e^{kΔ}`, `None` where the
/// count is uncertified or the dilation is refused.
fn zero_ladder(f: &DiscFunction, grid: usize) -> Vec<Option<i64>> {
    (-LADDER_RUNGS..=LADDER_RUNGS)
        .map(|k| {
            let r = (k as f64 * LADDER_STEP).exp();
            let cert = f.dilate(r, f64::INFINITY)?.certificate(grid).ok()?;
            (cert.min_boundary_modulus > cert.floor).then_some(cert.winding?)
        })
        .collect()
}

/// Best rung in `min_rung..=max_rung`: the centre of the longest run of
/// equal counts, with its half-width in rungs.
fn widest_gap(ladder: &[Option<i64>], min_rung: usize, max_rung: usize) -> Option<(usize, usize)> {
    let run = |k: usize, step: isize| {
        let Some(n) = ladder[k] else { return 0 };
        let mut len = 0;
        let mut j = k as isize + step;
        while j >= 0 && (j as usize) < ladder.len() && ladder[j as usize] == Some(n) {
            len += 1;
            j += step;
        }
        len
    };
    (min_rung..=max_rung.min(ladder.len() - 1))
        .filter(|&k| ladder[k].is_some())
        .map(|k| (k, run(k, -1).min(run(k, 1))))
        .max_by_key(|&(k, w)| (w, std::cmp::Reverse(k)))
}

/// Candidate plans other than the identity, widest zero-free annulus first.
pub fn plans(m: &MatFun, cfg: &FactorConfig) -> Vec<Plan> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
    let mut shears = vec![Complex64::default()];
    shears.extend((0..RANDOM_SHEARS).map(|_| {
        let r = SHEAR_RADIUS * rng.gen::<f64>().sqrt();
        Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
    }));
    let rung = |r: f64| LADDER_RUNGS as usize + (r.ln() / LADDER_STEP).round() as usize;
    let (min_rung, max_rung) = (rung(MIN_DILATION), rung(MAX_DILATION));
    let diff = &m.a - &m.d;
    let mut out: Vec<Plan> = shears
        .into_iter()
        .filter_map(|g| {
            let c = &(&m.c + &diff.scale(g)) - &m.b.scale(g * g);
            if c.is_zero() {
                return None;
            }
            let ladder = zero_ladder(&c, LADDER_GRID.max(2 * c.coeffs().len()));
            let (rung, width) = widest_gap(&ladder, min_rung, max_rung)?;
            let radius = ((rung as f64 - LADDER_RUNGS as f64) * LADDER_STEP).exp();
            m.dilate(radius, DILATION_GROWTH)?;
            Some(Plan {
                lower: g,
                radius,
                gap: width as f64 * LADDER_STEP,
            })
        })
        .collect();
    out.sort_by(|x, y| y.gap.total_cmp(&x.gap));
    out.truncate(MAX_PLANS);
    out
}
