//! The analysis drivers behind the subcommands: per-cut PPT and map
//! checks, the λ scan, the white-noise robustness solve, and the
//! two-witness region scan.

use crate::io::{RegionScanRow, RegionVerdict};
use gme_core::hermitian::{min_eigenvalue, trace_product, ComplexMatrix};
use gme_core::maps::{choi_map, Superoperator};
use gme_core::multipartite::{apply_map_partial, partial_transpose, enumerate_bipartitions, SpaceShape};
use gme_core::states::{add_white_noise, check_state, rho_lambda, two_param_family};
use gme_core::witness::{
    build_witness, evaluate_with_tol, flip_seed_policy, ghz_seed_policy, Verdict, DETECTION_TOL,
};
use gme_core::{Error, Result};

/// Minimum eigenvalue of ρ^{T_b} for every canonical bipartition, in
/// enumeration order, labeled like `0|12`.
pub fn ppt_check(rho: &ComplexMatrix, shape: &SpaceShape) -> Result<Vec<(String, f64)>> {
    check_state(rho)?;
    enumerate_bipartitions(shape)?
        .into_iter()
        .map(|part| {
            let pt = partial_transpose(rho, shape, part.inside())?;
            Ok((part.label(), min_eigenvalue(&pt)?))
        })
        .collect()
}

/// Minimum eigenvalue of (Λ ⊗ 𝟙)[ρ] for every canonical bipartition, the
/// map acting on whichever side matches its dimension.
pub fn map_check(
    rho: &ComplexMatrix,
    shape: &SpaceShape,
    map: &Superoperator,
) -> Result<Vec<(String, f64)>> {
    check_state(rho)?;
    enumerate_bipartitions(shape)?
        .into_iter()
        .map(|part| {
            let side = if shape.subset_dim(part.inside()) == map.dim() {
                part.inside()
            } else if shape.subset_dim(part.outside()) == map.dim() {
                part.outside()
            } else {
                return Err(Error::DimensionMismatch {
                    expected: map.dim(),
                    got: shape.subset_dim(part.inside()),
                });
            };
            let image = apply_map_partial(map, rho, shape, side)?.symmetrized()?;
            Ok((part.label(), min_eigenvalue(&image)?))
        })
        .collect()
}

/// The GME witness from seeds ψ_b = |GHZ₃⟩ on all three cuts of three
/// qutrits, for the given single-qutrit map.
pub fn qutrit_ghz_witness(map: &Superoperator) -> Result<ComplexMatrix> {
    let shape = SpaceShape::uniform(3, 3)?;
    Ok(build_witness(ghz_seed_policy(3, 3, map)?, &shape)?.witness)
}

/// The transpose-map witness with the qubit flip seeds embedded in the
/// {0,1} levels of three qutrits; the PPT reference point of the region
/// scan.
pub fn qutrit_ppt_witness() -> Result<ComplexMatrix> {
    let shape = SpaceShape::uniform(3, 3)?;
    Ok(build_witness(flip_seed_policy(3, 3)?, &shape)?.witness)
}

/// Witness value and verdict on ρ(λ) over a λ grid; the witness is built
/// once from the given map.
pub fn lambda_scan(
    grid: &[f64],
    map: &Superoperator,
    tol: f64,
) -> Result<Vec<(f64, f64, Verdict)>> {
    let w = qutrit_ghz_witness(map)?;
    grid.iter()
        .map(|&lambda| {
            let (value, verdict) = evaluate_with_tol(&w, &rho_lambda(lambda)?, tol)?;
            Ok((lambda, value, verdict))
        })
        .collect()
}

/// Inputs and solution of the white-noise threshold value(p) = 0.
#[derive(Debug, Clone, Copy)]
pub struct RobustnessResult {
    pub lambda: f64,
    pub p_crit: f64,
    pub witness_value_at_zero: f64,
    pub witness_trace: f64,
}

/// Critical white-noise weight for ρ(λ) under the given witness. The
/// value is affine in p, value(p) = (1−p)·Tr[ρ(λ)W] + p·Tr[W]/dim, so the
/// zero is solved in closed form and cross-checked by bisection on the
/// actual mixture; the two must agree to 1e-12. Returns None when the
/// noiseless state is not detected.
pub fn noise_robustness(
    lambda: f64,
    witness: &ComplexMatrix,
) -> Result<Option<RobustnessResult>> {
    let rho0 = rho_lambda(lambda)?;
    let dim = rho0.dim() as f64;
    let v0 = trace_product(&rho0, witness)?.re;
    let t = trace_product(&ComplexMatrix::identity(witness.dim()).scale_re(1.0 / dim), witness)?.re;
    if v0 >= -DETECTION_TOL {
        return Ok(None);
    }
    if t <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "witness trace {t:.3e} is not positive; no noise threshold exists"
        )));
    }
    let p_affine = v0 / (v0 - t);

    let value_at = |p: f64| -> Result<f64> {
        let mixed = add_white_noise(&rho0, p)?;
        Ok(trace_product(&mixed, witness)?.re)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if value_at(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let p_bisect = 0.5 * (lo + hi);
    if (p_bisect - p_affine).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "affine solve {p_affine:.15} and bisection {p_bisect:.15} disagree"
        )));
    }
    Ok(Some(RobustnessResult {
        lambda,
        p_crit: p_affine,
        witness_value_at_zero: v0,
        witness_trace: t * dim,
    }))
}

fn point_verdict(v_ppt: f64, v_choi: f64, tol: f64) -> RegionVerdict {
    match (v_ppt < -tol, v_choi < -tol) {
        (true, true) => RegionVerdict::Both,
        (true, false) => RegionVerdict::Ppt,
        (false, true) => RegionVerdict::Choi,
        (false, false) => RegionVerdict::None,
    }
}

/// Evaluate the PPT-seeded and Choi-seeded witnesses on the two-parameter
/// family over a steps × steps grid of [0,1]²; points outside the simplex
/// are kept as skipped rows so the output stays rectangular.
pub fn region_scan(steps: usize, tol: f64) -> Result<Vec<RegionScanRow>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 grid steps, got {steps}")));
    }
    let w_ppt = qutrit_ppt_witness()?;
    let w_choi = qutrit_ghz_witness(&choi_map())?;
    let coord = |k: usize| k as f64 / (steps - 1) as f64;
    let mut rows = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            let (p, q) = (coord(i), coord(j));
            if p + q > 1.0 + 1e-12 {
                rows.push(RegionScanRow { p, q, value_ppt: None, value_choi: None, verdict: RegionVerdict::Skip });
                continue;
            }
            let rho = two_param_family(p, q)?;
            let v_ppt = trace_product(&rho, &w_ppt)?.re;
            let v_choi = trace_product(&rho, &w_choi)?.re;
            rows.push(RegionScanRow {
                p,
                q,
                value_ppt: Some(v_ppt),
                value_choi: Some(v_choi),
                verdict: point_verdict(v_ppt, v_choi, tol),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gme_core::maps::transpose_map;
    use gme_core::states::ghz;

    #[test]
    fn ppt_check_reference_points() {
        let shape = SpaceShape::uniform(3, 3).unwrap();
        let mixed = ComplexMatrix::identity(27).scale_re(1.0 / 27.0);
        for (_, v) in ppt_check(&mixed, &shape).unwrap() {
            assert!((v - 1.0 / 27.0).abs() < 1e-12);
        }
        for lambda in [0.1, 0.5, 0.9] {
            for (cut, v) in ppt_check(&rho_lambda(lambda).unwrap(), &shape).unwrap() {
                assert!(v >= -1e-12, "λ = {lambda}, cut {cut}: {v}");
            }
        }
        let qubits = SpaceShape::uniform(3, 2).unwrap();
        let g = ComplexMatrix::outer(&ghz(3, 2).unwrap());
        for (cut, v) in ppt_check(&g, &qubits).unwrap() {
            assert!(v < -0.4, "cut {cut}: {v}");
        }
    }

    #[test]
    fn map_check_reference_points() {
        let shape = SpaceShape::uniform(3, 3).unwrap();
        let rho = rho_lambda(0.5).unwrap();
        let idm = gme_core::maps::identity_map(3);
        let direct = min_eigenvalue(&rho).unwrap();
        for (_, v) in map_check(&rho, &shape, &idm).unwrap() {
            assert!((v - direct).abs() < 1e-10);
        }
        for (cut, v) in map_check(&rho, &shape, &choi_map()).unwrap() {
            assert!(v < -1e-6, "cut {cut}: {v}");
        }
        let mixed = ComplexMatrix::identity(27).scale_re(1.0 / 27.0);
        for (_, v) in map_check(&mixed, &shape, &choi_map()).unwrap() {
            assert!(v > -1e-12);
        }
        // mismatched dimension rejected
        assert!(map_check(&rho, &shape, &transpose_map(2)).is_err());
    }

    #[test]
    fn lambda_scan_window() {
        let grid = [0.2, 0.5];
        let rows = lambda_scan(&grid, &choi_map(), DETECTION_TOL).unwrap();
        assert!(rows[0].1 < 0.0);
        assert_eq!(rows[0].2, Verdict::GmeDetected);
        assert!(rows[1].1 >= 0.0);
        assert_eq!(rows[1].2, Verdict::Undetected);
    }

    #[test]
    fn robustness_golden_and_closed_form() {
        let w = qutrit_ghz_witness(&choi_map()).unwrap();
        let r = noise_robustness(1.0 / 9.0, &w).unwrap().unwrap();
        assert!((r.p_crit - 9.0 / 179.0).abs() < 1e-6);
        // value at p_crit is zero by the affine relation
        let v = (1.0 - r.p_crit) * r.witness_value_at_zero + r.p_crit * r.witness_trace / 27.0;
        assert!(v.abs() < 1e-12);
        // undetected at λ = 0.5: no threshold
        assert!(noise_robustness(0.5, &w).unwrap().is_none());
    }

    #[test]
    fn robustness_qubit_closed_form() {
        // W = ½𝟙 − |GHZ⟩⟨GHZ| on ρ = |GHZ⟩⟨GHZ| with 𝟙/8 noise:
        // value(p) = −½(1−p) + p·3/8, zero at p = 4/7
        let g = ghz(3, 2).unwrap();
        let w = ComplexMatrix::identity(8)
            .scale_re(0.5)
            .sub(&ComplexMatrix::outer(&g))
            .unwrap();
        let rho0 = ComplexMatrix::outer(&g);
        let v0 = trace_product(&rho0, &w).unwrap().re;
        let t = w.trace().re / 8.0;
        let p = v0 / (v0 - t);
        assert!((p - 4.0 / 7.0).abs() < 1e-13);
        // bisection on the same affine value agrees
        let value_at = |p: f64| (1.0 - p) * v0 + p * t;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if value_at(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((0.5 * (lo + hi) - p).abs() < 1e-12);
    }

    #[test]
    fn region_scan_corners_and_shape() {
        let rows = region_scan(11, DETECTION_TOL).unwrap();
        assert_eq!(rows.len(), 121);
        let at = |p: f64, q: f64| {
            rows.iter()
                .find(|r| (r.p - p).abs() < 1e-12 && (r.q - q).abs() < 1e-12)
                .unwrap()
        };
        assert_eq!(at(1.0, 0.0).verdict, RegionVerdict::Both);
        assert_eq!(at(0.0, 1.0).verdict, RegionVerdict::Choi);
        assert_eq!(at(0.0, 0.0).verdict, RegionVerdict::None);
        assert_eq!(at(0.9, 0.9).verdict, RegionVerdict::Skip);
        assert!(at(0.9, 0.9).value_ppt.is_none());
    }

    #[test]
    fn region_values_affine_along_lines() {
        let w = qutrit_ghz_witness(&choi_map()).unwrap();
        let value = |p: f64, q: f64| {
            trace_product(&two_param_family(p, q).unwrap(), &w).unwrap().re
        };
        // three collinear points: midpoint value equals mean of endpoints
        let (a, b) = (value(0.1, 0.2), value(0.5, 0.4));
        let mid = value(0.3, 0.3);
        assert!((mid - 0.5 * (a + b)).abs() < 1e-12);
    }
}
