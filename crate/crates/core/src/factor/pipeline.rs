use std::time::Instant;

use super::{
    boundary_residual, detect_parabolic, dominant_root, eigen_conjugator, factor_parabolic,
    log_via_diagonalization, plans, reduction_candidates, scale_split, Branch, FactorConfig,
    FactorError, Factorization, Parabolic, Plan, ReductionRecord, StageTiming, DET_P_FLOOR,
};
use crate::holofun::HoloError;
use crate::mat2::{MatFun, SpecialLinear, Traceless};

/// Coefficient bound on the traces of the `SL₂` factors.
pub const FACTOR_TRACE_TOL: f64 = 1e-11;

pub(crate) struct Stopwatch {
    last: Instant,
    timings: Vec<StageTiming>,
}

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Stopwatch {
            last: Instant::now(),
            timings: Vec::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.timings.push(StageTiming {
            stage: stage.to_string(),
            seconds: (now - self.last).as_secs_f64(),
        });
        self.last = now;
    }
}

fn verify_traceless(m: MatFun, which: &str) -> Result<Traceless, FactorError> {
    Traceless::verify(m, FACTOR_TRACE_TOL)
        .map_err(|e| FactorError::Internal(format!("{which} lost its vanishing trace: {e}")))
}

/// Factors `A ∈ SL₂` as `exp(m1) · exp(m2)` with traceless `m1`, `m2`.
///
/// The generic branch runs on `A` itself and, unless that already meets
/// `cfg.residual_target`, once per preconditioning [`Plan`]: it factors
/// `L·A(R·w)·L⁻¹` and maps the factors back by `m(z) = L⁻¹ m_R(z/R) L`.
/// Besides moving zeros of `c` away from the certification circle, the
/// dilation turns singularities of the factors just outside the unit circle
/// into singularities outside the `R`-circle, so the truncation error of
/// the returned series shrinks like `R^{−N}`. For each plan the reduction
/// candidates are tried best `β` first. The search stops at the first
/// factorization whose boundary residual on the unit circle is within
/// `cfg.residual_target`; otherwise the smallest residual seen is returned.
pub fn factor_sl2(a: &SpecialLinear, cfg: &FactorConfig) -> Result<Factorization, FactorError> {
    let mut clock = Stopwatch::start();
    let grid = cfg.grid;
    let kind = detect_parabolic(a);
    if kind != Parabolic::None {
        let mut f = factor_parabolic(a, kind, grid)?;
        clock.lap("parabolic");
        f.timings = clock.timings;
        return Ok(f);
    }

    let m = a.matrix();
    let mut best: Option<Factorization> = None;
    let mut first_error = None;
    let mut queue = vec![Plan::IDENTITY];
    let mut planned = false;
    loop {
        let Some(plan) = queue.pop() else {
            let done = best
                .as_ref()
                .is_some_and(|b| b.residual <= cfg.residual_target);
            if planned || done {
                break;
            }
            planned = true;
            queue = plans(m, cfg);
            queue.reverse();
            clock.lap("plan");
            continue;
        };
        let Some(Ok(conditioned)) = plan
            .apply(m)
            .map(|p| SpecialLinear::verify(p, grid, cfg.det_tol))
        else {
            continue;
        };
        let candidates = match reduction_candidates(&conditioned, cfg) {
            Ok(c) => c,
            Err(e) => {
                first_error.get_or_insert(e);
                continue;
            }
        };
        clock.lap("reduction");
        for reduction in candidates {
            let result = factor_reduced(conditioned.matrix(), reduction, grid, &mut clock)
                .map(|f| restore(f, m, &plan, grid));
            match result {
                Ok(f) => {
                    let done = f.residual <= cfg.residual_target;
                    if best.as_ref().is_none_or(|b| f.residual < b.residual) {
                        best = Some(f);
                    }
                    if done {
                        queue.clear();
                        planned = true;
                        break;
                    }
                }
                Err(e) => {
                    first_error.get_or_insert(e);
                }
            }
        }
    }
    match best {
        Some(mut f) => {
            f.timings = clock.timings;
            Ok(f)
        }
        None => Err(first_error.unwrap_or(FactorError::ReductionFailed { attempts: 0 })),
    }
}

/// Maps factors of the preconditioned matrix back to factors of `A` and
/// recomputes the residual against `A`.
fn restore(mut f: Factorization, m: &MatFun, plan: &Plan, grid: usize) -> Factorization {
    if *plan != Plan::IDENTITY {
        f.m1 = plan.undo(&f.m1);
        f.m2 = plan.undo(&f.m2);
        f.residual = boundary_residual(m, &f.m1, &f.m2, grid);
    }
    f.plan = Some(*plan);
    f
}

fn factor_reduced(
    m: &MatFun,
    reduction: ReductionRecord,
    grid: usize,
    clock: &mut Stopwatch,
) -> Result<Factorization, FactorError> {
    let split = scale_split(&reduction.reduced, grid)?;
    clock.lap("scaling");
    let roots = dominant_root(&split.scaled.trace(), grid)?;
    clock.lap("dominant_root");
    let conj = eigen_conjugator(&split.scaled, &roots, Some(DET_P_FLOOR), grid)?;
    clock.lap("conjugator");
    let diag_log = log_via_diagonalization(&split.scaled, &roots.lambda, &conj, grid)?;
    clock.lap("logarithm");

    // A = E⁻¹ A' E and A' = exp(N₁) exp(N₂), so mᵢ = E⁻¹ Nᵢ E.
    let n1 = split.constant_log.into_inner();
    let n2 = diag_log.log.into_inner();
    let (m1, m2) = if reduction.h.is_zero() {
        (n1, n2)
    } else {
        let back = MatFun::upper_shear(-&reduction.h);
        (
            back.mul(&n1).mul(&reduction.shear),
            back.mul(&n2).mul(&reduction.shear),
        )
    };
    let m1 = verify_traceless(m1, "first factor")?;
    let m2 = verify_traceless(m2, "second factor")?;

    let residual = boundary_residual(m, m1.matrix(), m2.matrix(), grid);
    clock.lap("residual");

    Ok(Factorization {
        m1: m1.into_inner(),
        m2: m2.into_inner(),
        factor_count: 2,
        branch: Branch::Generic,
        inner_branch: None,
        residual,
        certificates: vec![reduction.certificate, roots.certificate, conj.certificate],
        delta: Some(split.delta),
        plan: None,
        timings: Vec::new(),
    })
}

/// Factors `A ∈ GL₂` whose determinant is a certified unit with winding 0.
///
/// With `ℓ = log det A` and the central `D = (ℓ/2)·I`, `exp(−D)·A ∈ SL₂`
/// factors as `exp(B)·exp(C)`, and `A = exp(D + B)·exp(C)`.
pub fn factor_gl2(a: &MatFun, cfg: &FactorConfig) -> Result<Factorization, FactorError> {
    let mut clock = Stopwatch::start();
    let grid = cfg.grid;
    let det = a.det();
    let cert = det.certificate(grid)?;
    match cert.winding {
        Some(0) if cert.is_unit() => {}
        Some(w) if w != 0 => return Err(FactorError::NotNullHomotopic(cert)),
        _ => return Err(HoloError::NotAUnit(cert).into()),
    }
    let half_log = det.log_sampled(grid)?.value.scale_real(0.5);
    let normalizer = half_log.map_sampled(grid, |v| (-v).exp());
    // The truncated product is factored as an exact polynomial; its distance
    // from `A/√det` is bounded by the det budget and by the final residual,
    // which is measured against `A`.
    let normalized = a.scale_by(&normalizer).map(|f| f.clone().with_tail(0.0));
    let normalized = SpecialLinear::verify(normalized, grid, cfg.det_tol)?;
    clock.lap("normalization");

    let inner = factor_sl2(&normalized, cfg)?;
    clock.timings.extend(inner.timings.iter().cloned());

    let scalar = MatFun::diag(half_log.clone(), half_log.clone());
    let m1 = scalar.add(&inner.m1);
    let m2 = inner.m2;

    verify_traceless(inner.m1, "first factor")?;
    verify_traceless(m2.clone(), "second factor")?;
    let residual = boundary_residual(a, &m1, &m2, grid);
    clock.lap("residual");

    let mut certificates = vec![cert];
    certificates.extend(inner.certificates);
    Ok(Factorization {
        m1,
        m2,
        factor_count: inner.factor_count,
        branch: Branch::Gl2,
        inner_branch: Some(inner.branch),
        residual,
        certificates,
        delta: inner.delta,
        plan: inner.plan,
        timings: clock.timings,
    })
}
