//! The field evaluator: caches per-point solution data and linear solves,
//! computes the master contraction along two routes, and derives all named
//! variables.

use crate::{
    DeformConstants, FieldError, FieldId, MasterArgs, Scalar, ROUTE_AGREEMENT_BOUND,
    TAU_IDENTITY_BOUND,
};
use lattice::{range_sum, resolve_selector, Direction, LatticeParams, LatticePoint};
use numkit::{cr, determinant, lu_factor, CMatrix, LuFactors};
use solution::{PointData, SystemSource};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

/// Solution data plus the coupling products at one point.
struct PointCache {
    data: PointData,
    /// `I + M·C`, `N × N`.
    i_mc: CMatrix,
    /// `I + C·M`, `N' × N'`.
    i_cm: CMatrix,
    tau: Scalar,
}

fn scalar_key(value: Scalar) -> (u64, u64) {
    (value.re.to_bits(), value.im.to_bits())
}

/// Evaluates fields over one system. Caching is internal and this type is
/// meant for single-threaded use; share the underlying system (not the
/// evaluator) across workers if parallel evaluation is ever needed.
pub struct Evaluator<S: SystemSource> {
    source: S,
    constants: DeformConstants,
    strict_z: bool,
    points: RefCell<HashMap<LatticePoint, Rc<PointCache>>>,
    lu_mc: RefCell<HashMap<LatticePoint, Rc<LuFactors>>>,
    lu_cm_t: RefCell<HashMap<LatticePoint, Rc<LuFactors>>>,
    /// LU factors of `aI + Γ`, keyed by the bits of `a`.
    shift_k: RefCell<HashMap<(u64, u64), Rc<LuFactors>>>,
    /// LU factors of `(bI + Λ)ᵀ`, keyed by the bits of `b`.
    shift_l: RefCell<HashMap<(u64, u64), Rc<LuFactors>>>,
}

impl<S: SystemSource> Evaluator<S> {
    pub fn new(source: S, constants: DeformConstants) -> Result<Self, FieldError> {
        constants.validate()?;
        Ok(Evaluator {
            source,
            constants,
            strict_z: false,
            points: RefCell::new(HashMap::new()),
            lu_mc: RefCell::new(HashMap::new()),
            lu_cm_t: RefCell::new(HashMap::new()),
            shift_k: RefCell::new(HashMap::new()),
            shift_l: RefCell::new(HashMap::new()),
        })
    }

    /// Switches the z-field to the literal direction-index sum (see
    /// [`Evaluator::field`] on `FieldId::Z`). Off by default.
    pub fn with_strict_z(mut self, strict: bool) -> Self {
        self.strict_z = strict;
        self
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    pub fn params(&self) -> &LatticeParams {
        self.source.params()
    }

    pub fn constants(&self) -> &DeformConstants {
        &self.constants
    }

    fn point_cache(&self, point: LatticePoint) -> Result<Rc<PointCache>, FieldError> {
        if let Some(cached) = self.points.borrow().get(&point) {
            return Ok(Rc::clone(cached));
        }
        let data = self.source.data_at(point)?;
        let (n, n_prime) = self.source.dims();
        let c = self.source.coupling();
        let i_mc = CMatrix::identity(n).add(&data.m.matmul(c));
        let i_cm = CMatrix::identity(n_prime).add(&c.matmul(&data.m));
        let t1 = determinant(&i_mc);
        let t2 = determinant(&i_cm);
        // The two determinants are equal as polynomials in the entries of
        // M·C; disagreement beyond rounding means the evaluation is broken.
        assert!(
            (t1 - t2).norm() <= TAU_IDENTITY_BOUND * t1.norm().max(1.0),
            "tau determinant identity violated at {point}: {t1} vs {t2}"
        );
        let cache = Rc::new(PointCache {
            data,
            i_mc,
            i_cm,
            tau: t1,
        });
        self.points
            .borrow_mut()
            .insert(point, Rc::clone(&cache));
        Ok(cache)
    }

    fn lu_i_mc(&self, point: LatticePoint) -> Result<Rc<LuFactors>, FieldError> {
        if let Some(cached) = self.lu_mc.borrow().get(&point) {
            return Ok(Rc::clone(cached));
        }
        let cache = self.point_cache(point)?;
        let factors = lu_factor(&cache.i_mc).map_err(|_| FieldError::TauZero { point })?;
        let rc = Rc::new(factors);
        self.lu_mc.borrow_mut().insert(point, Rc::clone(&rc));
        Ok(rc)
    }

    fn lu_i_cm_t(&self, point: LatticePoint) -> Result<Rc<LuFactors>, FieldError> {
        if let Some(cached) = self.lu_cm_t.borrow().get(&point) {
            return Ok(Rc::clone(cached));
        }
        let cache = self.point_cache(point)?;
        let factors =
            lu_factor(&cache.i_cm.transpose()).map_err(|_| FieldError::TauZero { point })?;
        let rc = Rc::new(factors);
        self.lu_cm_t.borrow_mut().insert(point, Rc::clone(&rc));
        Ok(rc)
    }

    fn shift_k_lu(&self, a: Scalar) -> Result<Rc<LuFactors>, FieldError> {
        if let Some(cached) = self.shift_k.borrow().get(&scalar_key(a)) {
            return Ok(Rc::clone(cached));
        }
        let n = self.source.dims().0;
        let shifted = CMatrix::identity(n).scale(a).add(self.source.gamma());
        let factors = lu_factor(&shifted).map_err(|_| FieldError::SingularShift {
            value: a,
            side: "column",
        })?;
        let rc = Rc::new(factors);
        self.shift_k.borrow_mut().insert(scalar_key(a), Rc::clone(&rc));
        Ok(rc)
    }

    fn shift_l_lu(&self, b: Scalar) -> Result<Rc<LuFactors>, FieldError> {
        if let Some(cached) = self.shift_l.borrow().get(&scalar_key(b)) {
            return Ok(Rc::clone(cached));
        }
        let n_prime = self.source.dims().1;
        let shifted = CMatrix::identity(n_prime)
            .scale(b)
            .add(self.source.lambda())
            .transpose();
        let factors = lu_factor(&shifted).map_err(|_| FieldError::SingularShift {
            value: b,
            side: "row",
        })?;
        let rc = Rc::new(factors);
        self.shift_l.borrow_mut().insert(scalar_key(b), Rc::clone(&rc));
        Ok(rc)
    }

    /// `(aI + Γ)^i x` for a column `x`, negative powers by repeated solves.
    fn apply_shift_k(&self, x: &CMatrix, i: i64, a: Scalar) -> Result<CMatrix, FieldError> {
        if i >= 0 {
            let n = self.source.dims().0;
            let shifted = CMatrix::identity(n).scale(a).add(self.source.gamma());
            let mut out = x.clone();
            for _ in 0..i {
                out = shifted.matmul(&out);
            }
            Ok(out)
        } else {
            let lu = self.shift_k_lu(a)?;
            let mut out = x.clone();
            for _ in 0..(-i) {
                out = lu.solve(&out);
            }
            Ok(out)
        }
    }

    /// `y (bI + Λ)^j` for a row `y`, negative powers by transposed solves.
    fn apply_shift_l(&self, y: &CMatrix, j: i64, b: Scalar) -> Result<CMatrix, FieldError> {
        if j >= 0 {
            let n_prime = self.source.dims().1;
            let shifted = CMatrix::identity(n_prime).scale(b).add(self.source.lambda());
            let mut out = y.clone();
            for _ in 0..j {
                out = out.matmul(&shifted);
            }
            Ok(out)
        } else {
            let lu = self.shift_l_lu(b)?;
            let mut out = y.transpose();
            for _ in 0..(-j) {
                out = lu.solve(&out);
            }
            Ok(out.transpose())
        }
    }

    /// Auxiliary column vector `(I + MC)^{-1} (aI + Γ)^i r`.
    pub fn uvec(&self, point: LatticePoint, i: i64, a: Scalar) -> Result<CMatrix, FieldError> {
        let cache = self.point_cache(point)?;
        let rhs = self.apply_shift_k(&cache.data.r, i, a)?;
        Ok(self.lu_i_mc(point)?.solve(&rhs))
    }

    /// Auxiliary row vector `s (bI + Λ)^j (I + CM)^{-1}`.
    pub fn tuvec(&self, point: LatticePoint, j: i64, b: Scalar) -> Result<CMatrix, FieldError> {
        let cache = self.point_cache(point)?;
        let lhs = self.apply_shift_l(&cache.data.s, j, b)?;
        Ok(self.lu_i_cm_t(point)?.solve(&lhs.transpose()).transpose())
    }

    /// The master contraction with explicit scalar offsets. Computed along
    /// both routes and cross-checked.
    pub fn master_s(
        &self,
        point: LatticePoint,
        i: i64,
        j: i64,
        a: Scalar,
        b: Scalar,
    ) -> Result<Scalar, FieldError> {
        let cache = self.point_cache(point)?;
        let c = self.source.coupling();

        let u = self.uvec(point, i, a)?;
        let s_shift = self.apply_shift_l(&cache.data.s, j, b)?;
        let route1 = s_shift.matmul(c).matmul(&u).get(0, 0);

        let tu = self.tuvec(point, j, b)?;
        let r_shift = self.apply_shift_k(&cache.data.r, i, a)?;
        let route2 = tu.matmul(c).matmul(&r_shift).get(0, 0);

        if (route1 - route2).norm() > ROUTE_AGREEMENT_BOUND * route1.norm().max(1.0) {
            return Err(FieldError::InternalMismatch {
                point,
                i,
                j,
                route1,
                route2,
            });
        }
        Ok(route1)
    }

    /// The master contraction with selector offsets, resolved at `point`.
    pub fn master(&self, point: LatticePoint, args: &MasterArgs) -> Result<Scalar, FieldError> {
        let a = resolve_selector(args.a, point, self.params())?;
        let b = resolve_selector(args.b, point, self.params())?;
        self.master_s(point, args.i, args.j, a, b)
    }

    /// τ at `point`: the determinant of `I + MC`, cross-checked against
    /// `det(I + CM)`. A vanishing value is a legitimate pole, not an error.
    pub fn tau(&self, point: LatticePoint) -> Result<Scalar, FieldError> {
        Ok(self.point_cache(point)?.tau)
    }

    /// Evaluates a named field. Selectors resolve at `point`.
    pub fn field(&self, point: LatticePoint, id: &FieldId) -> Result<Scalar, FieldError> {
        let params = self.params();
        let one = cr(1.0);
        let zero = Scalar::new(0.0, 0.0);
        match *id {
            FieldId::S { i, j, a, b } => self.master(point, &MasterArgs { i, j, a, b }),
            FieldId::U => self.master_s(point, 0, 0, zero, zero),
            FieldId::V => Ok(one - self.master_s(point, -1, 0, zero, zero)?),
            FieldId::W => Ok(one - self.master_s(point, 0, -1, zero, zero)?),
            FieldId::Va(a) => {
                let a = resolve_selector(a, point, params)?;
                Ok(one - self.master_s(point, -1, 0, a, zero)?)
            }
            FieldId::Wb(b) => {
                let b = resolve_selector(b, point, params)?;
                Ok(one - self.master_s(point, 0, -1, zero, b)?)
            }
            FieldId::Sab(a, b) => {
                let a = resolve_selector(a, point, params)?;
                let b = resolve_selector(b, point, params)?;
                self.master_s(point, -1, -1, a, b)
            }
            FieldId::Sa(a) => {
                let a = resolve_selector(a, point, params)?;
                Ok(a - self.master_s(point, -1, 1, a, zero)?)
            }
            FieldId::Tb(b) => {
                let b = resolve_selector(b, point, params)?;
                Ok(self.master_s(point, 1, -1, zero, b)? - b)
            }
            FieldId::Z => {
                let base = params.base();
                let core = self.master_s(point, -1, -1, zero, zero)?;
                let sum_p = range_sum(
                    |t| params.value(Direction::N, t).map(|p| one / p),
                    base.n,
                    point.n,
                )?;
                let sum_q = range_sum(
                    |t| params.value(Direction::M, t).map(|q| one / q),
                    base.m,
                    point.m,
                )?;
                // The third sum runs over the h direction. The default form
                // uses the parameter values there, mirroring the first two
                // directions; the strict variant divides by the raw
                // direction index instead, which is only well-defined when
                // the index range avoids zero.
                let sum_r = if self.strict_z {
                    range_sum(
                        |l| {
                            if l == 0 {
                                Err(lattice::LatticeError::SingularConfiguration(
                                    "strict z-sum reaches direction index 0".into(),
                                ))
                            } else {
                                Ok(one / cr(l as f64))
                            }
                        },
                        base.h,
                        point.h,
                    )?
                } else {
                    range_sum(
                        |t| params.value(Direction::H, t).map(|r| one / r),
                        base.h,
                        point.h,
                    )?
                };
                Ok(core - (sum_p + sum_q + sum_r + self.constants.z0))
            }
            FieldId::Tau => self.tau(point),
            FieldId::UVec0 { i, a } => {
                let a = resolve_selector(a, point, params)?;
                Ok(self.uvec(point, i, a)?.get(0, 0))
            }
            FieldId::TUVec0 { j, b } => {
                let b = resolve_selector(b, point, params)?;
                Ok(self.tuvec(point, j, b)?.get(0, 0))
            }
        }
    }
}
