//! Point-wise assembly of the solution data: wave vectors, the three-factor
//! coefficient matrix, and the certified solution state.

use crate::spectral::{build_gamma_lambda, constant_factor, BlockSpec, SpectralConfig};
use crate::waves::{direction_jet, plane_wave, WaveSide};
use crate::{PointData, Scalar, SolutionError, SystemSource, SYLVESTER_RESIDUAL_BOUND};
use lattice::{validate_params, Direction, LatticeParams, LatticePoint};
use numkit::{CMatrix, Jet};

/// Full solution data at one lattice point, with the factors of
/// `M = F·G·H` kept alongside the product.
#[derive(Debug, Clone)]
pub struct SolutionState {
    pub point: LatticePoint,
    /// Column-side wave factor, block-diagonal `N × N`.
    pub f: CMatrix,
    /// Constant middle factor, `N × N'`.
    pub g: CMatrix,
    /// Row-side wave factor, block-diagonal `N' × N'`.
    pub h: CMatrix,
    /// Coefficient matrix `F·G·H`, `N × N'`.
    pub m: CMatrix,
    /// Column wave vector, `N × 1`.
    pub r: CMatrix,
    /// Row wave vector, `1 × N'`.
    pub s: CMatrix,
    /// Amplitude-scaled wave jets, one per column-side eigenvalue run entry
    /// or Jordan chain, in block order.
    pub rho_jets: Vec<Jet>,
    /// Same for the row side.
    pub varrho_jets: Vec<Jet>,
}

/// One flattened wave source: a single eigenvalue of a diagonal run, or a
/// whole Jordan chain. Holds per-direction cumulative product tables from
/// the base to every window index.
#[derive(Debug, Clone)]
struct WaveUnit {
    jordan: bool,
    size: usize,
    amplitude: Scalar,
    tables: [Vec<Jet>; 3],
}

impl WaveUnit {
    fn build(
        params: &LatticeParams,
        eigenvalue: Scalar,
        amplitude: Scalar,
        jordan: bool,
        size: usize,
        side: WaveSide,
        order: usize,
    ) -> Result<Self, SolutionError> {
        let mut tables: [Vec<Jet>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (slot, dir) in Direction::ALL.iter().enumerate() {
            let (lo, hi) = params.window().range(*dir);
            let mut table = Vec::with_capacity((hi - lo + 1) as usize);
            for idx in lo..=hi {
                table.push(direction_jet(params, *dir, idx, eigenvalue, side, order)?);
            }
            tables[slot] = table;
        }
        Ok(WaveUnit {
            jordan,
            size,
            amplitude,
            tables,
        })
    }

    /// Wave jet at `point`: product of the cached per-direction jets, scaled
    /// by the amplitude. Identical to calling [`plane_wave`] directly.
    fn jet_at(&self, params: &LatticeParams, point: LatticePoint) -> Result<Jet, SolutionError> {
        let mut parts = Vec::with_capacity(3);
        for (slot, dir) in Direction::ALL.iter().enumerate() {
            let (lo, hi) = params.window().range(*dir);
            let coord = point.coord(*dir);
            if coord < lo || coord > hi {
                return Err(lattice::LatticeError::IndexOutOfWindow {
                    direction: *dir,
                    index: coord,
                    lo,
                    hi,
                }
                .into());
            }
            parts.push(&self.tables[slot][(coord - lo) as usize]);
        }
        Ok(parts[0].mul(parts[1]).mul(parts[2]).scale(self.amplitude))
    }
}

fn flatten_units(
    params: &LatticeParams,
    blocks: &[BlockSpec],
    side: WaveSide,
    order: usize,
) -> Result<Vec<WaveUnit>, SolutionError> {
    let mut units = Vec::new();
    for block in blocks {
        match block {
            BlockSpec::Diagonal { values, amplitudes } => {
                for (v, a) in values.iter().zip(amplitudes) {
                    units.push(WaveUnit::build(params, *v, *a, false, 1, side, order)?);
                }
            }
            BlockSpec::Jordan {
                value,
                size,
                amplitude,
            } => {
                units.push(WaveUnit::build(
                    params, *value, *amplitude, true, *size, side, order,
                )?);
            }
        }
    }
    Ok(units)
}

/// Builds solution data at arbitrary window points for one spectral
/// configuration over one parameter table. Construction validates the
/// parameters against the spectra and precomputes all per-direction wave
/// tables; evaluation afterwards is read-only.
#[derive(Debug, Clone)]
pub struct SolutionBuilder {
    params: LatticeParams,
    spec: SpectralConfig,
    gamma: CMatrix,
    lambda: CMatrix,
    g: CMatrix,
    k_units: Vec<WaveUnit>,
    kappa_units: Vec<WaveUnit>,
}

impl SolutionBuilder {
    pub fn new(params: LatticeParams, spec: SpectralConfig) -> Result<Self, SolutionError> {
        validate_params(&params, &spec.spectral_values(), &[], &[])?;
        let (gamma, lambda) = build_gamma_lambda(&spec);
        let g = constant_factor(&spec);
        let order = spec.order();
        let k_units = flatten_units(&params, spec.k_blocks(), WaveSide::Column, order)?;
        let kappa_units = flatten_units(&params, spec.kappa_blocks(), WaveSide::Row, order)?;
        Ok(SolutionBuilder {
            params,
            spec,
            gamma,
            lambda,
            g,
            k_units,
            kappa_units,
        })
    }

    pub fn spec(&self) -> &SpectralConfig {
        &self.spec
    }

    /// Assembles and certifies the full solution state at `point`.
    pub fn build_m(&self, point: LatticePoint) -> Result<SolutionState, SolutionError> {
        let n = self.spec.n();
        let n_prime = self.spec.n_prime();
        let rho_jets: Vec<Jet> = self
            .k_units
            .iter()
            .map(|u| u.jet_at(&self.params, point))
            .collect::<Result<_, _>>()?;
        let varrho_jets: Vec<Jet> = self
            .kappa_units
            .iter()
            .map(|u| u.jet_at(&self.params, point))
            .collect::<Result<_, _>>()?;

        let r = assemble_column(&self.k_units, &rho_jets, n);
        let s = assemble_row(&self.kappa_units, &varrho_jets, n_prime);
        let f = assemble_f(&self.k_units, &rho_jets, n);
        let h = assemble_h(&self.kappa_units, &varrho_jets, n_prime);
        let m = f.matmul(&self.g).matmul(&h);

        let rs = r.matmul(&s);
        let residual = self
            .gamma
            .matmul(&m)
            .add(&m.matmul(&self.lambda))
            .sub(&rs)
            .max_abs();
        let bound = SYLVESTER_RESIDUAL_BOUND * rs.max_abs().max(1.0);
        if residual > bound {
            return Err(SolutionError::SylvesterResidualTooLarge {
                residual,
                bound,
                point,
            });
        }

        Ok(SolutionState {
            point,
            f,
            g: self.g.clone(),
            h,
            m,
            r,
            s,
            rho_jets,
            varrho_jets,
        })
    }
}

impl SystemSource for SolutionBuilder {
    fn dims(&self) -> (usize, usize) {
        (self.spec.n(), self.spec.n_prime())
    }

    fn params(&self) -> &LatticeParams {
        &self.params
    }

    fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    fn lambda(&self) -> &CMatrix {
        &self.lambda
    }

    fn coupling(&self) -> &CMatrix {
        self.spec.coupling()
    }

    fn data_at(&self, point: LatticePoint) -> Result<PointData, SolutionError> {
        let state = self.build_m(point)?;
        Ok(PointData {
            m: state.m,
            r: state.r,
            s: state.s,
        })
    }
}

/// Wave vectors at one point, computed directly from [`plane_wave`] without
/// the builder's tables.
pub fn build_r_s(
    params: &LatticeParams,
    point: LatticePoint,
    spec: &SpectralConfig,
) -> Result<(CMatrix, CMatrix), SolutionError> {
    let order = spec.order();
    let mut rho_jets = Vec::new();
    let mut k_meta = Vec::new();
    for block in spec.k_blocks() {
        match block {
            BlockSpec::Diagonal { values, amplitudes } => {
                for (v, a) in values.iter().zip(amplitudes) {
                    rho_jets.push(plane_wave(params, point, *v, *a, WaveSide::Column, order)?);
                    k_meta.push((false, 1usize));
                }
            }
            BlockSpec::Jordan { value, size, amplitude } => {
                rho_jets.push(plane_wave(
                    params,
                    point,
                    *value,
                    *amplitude,
                    WaveSide::Column,
                    order,
                )?);
                k_meta.push((true, *size));
            }
        }
    }
    let mut varrho_jets = Vec::new();
    let mut kappa_meta = Vec::new();
    for block in spec.kappa_blocks() {
        match block {
            BlockSpec::Diagonal { values, amplitudes } => {
                for (v, a) in values.iter().zip(amplitudes) {
                    varrho_jets.push(plane_wave(params, point, *v, *a, WaveSide::Row, order)?);
                    kappa_meta.push((false, 1usize));
                }
            }
            BlockSpec::Jordan { value, size, amplitude } => {
                varrho_jets.push(plane_wave(
                    params,
                    point,
                    *value,
                    *amplitude,
                    WaveSide::Row,
                    order,
                )?);
                kappa_meta.push((true, *size));
            }
        }
    }
    let r = assemble_column_from_meta(&k_meta, &rho_jets, spec.n());
    let s = assemble_row_from_meta(&kappa_meta, &varrho_jets, spec.n_prime());
    Ok((r, s))
}

fn assemble_column(units: &[WaveUnit], jets: &[Jet], n: usize) -> CMatrix {
    let meta: Vec<(bool, usize)> = units.iter().map(|u| (u.jordan, u.size)).collect();
    assemble_column_from_meta(&meta, jets, n)
}

fn assemble_row(units: &[WaveUnit], jets: &[Jet], n_prime: usize) -> CMatrix {
    let meta: Vec<(bool, usize)> = units.iter().map(|u| (u.jordan, u.size)).collect();
    assemble_row_from_meta(&meta, jets, n_prime)
}

/// Column vector: jet value for simple eigenvalues, the ascending Taylor
/// coefficients for a Jordan chain.
fn assemble_column_from_meta(meta: &[(bool, usize)], jets: &[Jet], n: usize) -> CMatrix {
    let mut r = CMatrix::zeros(n, 1);
    let mut at = 0;
    for ((jordan, size), jet) in meta.iter().zip(jets) {
        if !jordan {
            r.set(at, 0, jet.coeff(0));
            at += 1;
        } else {
            for i in 0..*size {
                r.set(at + i, 0, jet.coeff(i));
            }
            at += size;
        }
    }
    r
}

/// Row vector: jet value for simple eigenvalues; Jordan chains lay their
/// Taylor coefficients out in reverse, highest derivative first.
fn assemble_row_from_meta(meta: &[(bool, usize)], jets: &[Jet], n_prime: usize) -> CMatrix {
    let mut s = CMatrix::zeros(1, n_prime);
    let mut at = 0;
    for ((jordan, size), jet) in meta.iter().zip(jets) {
        if !jordan {
            s.set(0, at, jet.coeff(0));
            at += 1;
        } else {
            for t in 0..*size {
                s.set(0, at + t, jet.coeff(size - 1 - t));
            }
            at += size;
        }
    }
    s
}

/// Column-side factor: scalar wave on the diagonal for simple eigenvalues,
/// a lower-triangular Toeplitz block of Taylor coefficients per chain.
fn assemble_f(units: &[WaveUnit], jets: &[Jet], n: usize) -> CMatrix {
    let mut f = CMatrix::zeros(n, n);
    let mut at = 0;
    for (unit, jet) in units.iter().zip(jets) {
        if !unit.jordan {
            f.set(at, at, jet.coeff(0));
            at += 1;
        } else {
            for i in 0..unit.size {
                for j in 0..=i {
                    f.set(at + i, at + j, jet.coeff(i - j));
                }
            }
            at += unit.size;
        }
    }
    f
}

/// Row-side factor: anti-triangular Toeplitz blocks, coefficients running
/// up the anti-diagonals.
fn assemble_h(units: &[WaveUnit], jets: &[Jet], n_prime: usize) -> CMatrix {
    let mut h = CMatrix::zeros(n_prime, n_prime);
    let mut at = 0;
    for (unit, jet) in units.iter().zip(jets) {
        if !unit.jordan {
            h.set(at, at, jet.coeff(0));
            at += 1;
        } else {
            let sz = unit.size;
            for i in 0..sz {
                for j in 0..(sz - i) {
                    h.set(at + i, at + j, jet.coeff(sz - 1 - i - j));
                }
            }
            at += sz;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use proptest::prelude::*;

    /// Bound on the wave-vector shift-relation residuals.
    const WAVE_RECURRENCE_TOL: f64 = 1e-12;
    /// Bound on the one-step update law of the coefficient matrix.
    const M_DYNAMICS_TOL: f64 = 1e-11;

    fn crs(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    fn e1_builder() -> SolutionBuilder {
        SolutionBuilder::new(presets::constant_params(-1, 5), presets::one_soliton()).unwrap()
    }

    // === frozen reference values ===

    #[test]
    fn reference_solution_at_base_point() {
        let state = e1_builder().build_m(LatticePoint::new(0, 0, 0)).unwrap();
        assert!((state.r.get(0, 0) - crs(1.0)).norm() < 1e-15, "r = [1] at base");
        assert!((state.s.get(0, 0) - crs(1.0)).norm() < 1e-15, "s = [1] at base");
        assert!(
            (state.m.get(0, 0) - crs(0.2)).norm() < 1e-15,
            "M = 1/(1+4) at base, got {}",
            state.m.get(0, 0)
        );
    }

    #[test]
    fn reference_solution_one_step_in_n() {
        let state = e1_builder().build_m(LatticePoint::new(1, 0, 0)).unwrap();
        assert!((state.r.get(0, 0) - crs(1.5)).norm() < 1e-15, "r = [3/2]");
        assert!((state.s.get(0, 0) - crs(-1.0)).norm() < 1e-15, "s = [-1]");
        assert!(
            (state.m.get(0, 0) - crs(-0.3)).norm() < 1e-15,
            "M = (3/2)(-1)/5 = -3/10, got {}",
            state.m.get(0, 0)
        );
    }

    #[test]
    fn jordan_chain_column_vector_stacks_taylor_coefficients() {
        let spec = SpectralConfig::new(
            vec![BlockSpec::Jordan {
                value: crs(1.0),
                size: 2,
                amplitude: crs(1.0),
            }],
            vec![BlockSpec::Jordan {
                value: crs(0.5),
                size: 2,
                amplitude: crs(1.0),
            }],
            None,
        )
        .unwrap();
        let builder = SolutionBuilder::new(presets::constant_params(-1, 5), spec).unwrap();
        let state = builder.build_m(LatticePoint::new(1, 0, 0)).unwrap();
        assert!(
            (state.r.get(0, 0) - crs(1.5)).norm() < 1e-15,
            "value of 1 + k/2 at k=1"
        );
        assert!(
            (state.r.get(1, 0) - crs(0.5)).norm() < 1e-15,
            "derivative of 1 + k/2"
        );
    }

    #[test]
    fn free_vector_assembly_matches_the_builder() {
        let builder = SolutionBuilder::new(
            presets::acceptance_params(),
            presets::mixed_spectrum(),
        )
        .unwrap();
        for point in [
            LatticePoint::new(0, 0, 0),
            LatticePoint::new(2, 1, 3),
            LatticePoint::new(4, 4, 4),
        ] {
            let state = builder.build_m(point).unwrap();
            let (r, s) = build_r_s(builder.params(), point, builder.spec()).unwrap();
            assert_eq!(state.r, r, "r at {point} must match the direct computation");
            assert_eq!(state.s, s, "s at {point} must match the direct computation");
        }
    }

    #[test]
    fn m_dynamics_at_the_reference_base_point() {
        // One forward step in n: M(1,0,0) - M(0,0,0) - (1/p_0) r(0,0,0) s(1,0,0)
        // = -3/10 - 1/5 + 1/2 = 0.
        let builder = e1_builder();
        let here = builder.build_m(LatticePoint::new(0, 0, 0)).unwrap();
        let there = builder.build_m(LatticePoint::new(1, 0, 0)).unwrap();
        let step = there.m.get(0, 0)
            - here.m.get(0, 0)
            - here.r.get(0, 0) * there.s.get(0, 0) / crs(2.0);
        assert!(step.norm() < 1e-15, "one-step update law violated by {}", step.norm());
    }

    // === properties over the solution classes ===

    fn class_strategy() -> impl Strategy<Value = SpectralConfig> {
        prop_oneof![
            Just(presets::one_soliton()),
            Just(presets::two_soliton()),
            Just(presets::jordan_chain(2)),
            Just(presets::jordan_chain(3)),
            Just(presets::mixed_spectrum()),
        ]
    }

    fn point_strategy() -> impl Strategy<Value = LatticePoint> {
        (0i64..5, 0i64..5, 0i64..5).prop_map(|(n, m, h)| LatticePoint::new(n, m, h))
    }

    proptest! {
        #[test]
        fn defining_relation_certified_everywhere(spec in class_strategy(), point in point_strategy()) {
            let builder = SolutionBuilder::new(presets::acceptance_params(), spec).unwrap();
            // build_m re-checks the defining relation internally and errors
            // if the residual exceeds the certification bound.
            prop_assert!(builder.build_m(point).is_ok());
        }

        #[test]
        fn wave_vectors_satisfy_their_shift_relations(
            spec in class_strategy(),
            point in (0i64..4, 0i64..5, 0i64..5).prop_map(|(n, m, h)| LatticePoint::new(n, m, h)),
        ) {
            let builder = SolutionBuilder::new(presets::acceptance_params(), spec).unwrap();
            let here = builder.build_m(point).unwrap();
            let there = builder.build_m(point.step(Direction::N, 1)).unwrap();
            let p = builder.params().p(point.n).unwrap();

            // p_n r(n+1) = (p_n I + Gamma) r(n)
            let lhs = there.r.scale(p);
            let shift = CMatrix::identity(builder.spec().n()).scale(p).add(builder.gamma());
            let rhs = shift.matmul(&here.r);
            let r_err = lhs.sub(&rhs).max_abs();
            prop_assert!(
                r_err <= WAVE_RECURRENCE_TOL * rhs.max_abs().max(1.0),
                "column shift relation residual {r_err:.3e}"
            );

            // s(n+1) (p_n I - Lambda) = p_n s(n)
            let shift_s = CMatrix::identity(builder.spec().n_prime())
                .scale(p)
                .sub(builder.lambda());
            let lhs_s = there.s.matmul(&shift_s);
            let rhs_s = here.s.scale(p);
            let s_err = lhs_s.sub(&rhs_s).max_abs();
            prop_assert!(
                s_err <= WAVE_RECURRENCE_TOL * rhs_s.max_abs().max(1.0),
                "row shift relation residual {s_err:.3e}"
            );
        }

        #[test]
        fn coefficient_matrix_obeys_the_update_law(
            spec in class_strategy(),
            point in (0i64..4, 0i64..5, 0i64..5).prop_map(|(n, m, h)| LatticePoint::new(n, m, h)),
        ) {
            let builder = SolutionBuilder::new(presets::acceptance_params(), spec).unwrap();
            let here = builder.build_m(point).unwrap();
            let there = builder.build_m(point.step(Direction::N, 1)).unwrap();
            let p = builder.params().p(point.n).unwrap();
            let update = there
                .m
                .sub(&here.m)
                .sub(&here.r.matmul(&there.s).scale(crs(1.0) / p));
            let err = update.max_abs();
            prop_assert!(
                err <= M_DYNAMICS_TOL * here.m.max_abs().max(1.0),
                "update law residual {err:.3e} at {point}"
            );
        }
    }
}
