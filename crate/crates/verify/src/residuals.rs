//! Normalized residuals for every checkable relation. Each function
//! evaluates the relation in sum-to-zero form on the fields of one
//! constructed solution; ratio identities are cross-multiplied first and
//! their denominators guarded against degeneracy.

use crate::ids::{CheckId, EquationId, LaxFamily, MiuraId, RecurrenceId};
use crate::{norm_matrix_terms, norm_terms, Residual, Scalar, VerifyError, DENOMINATOR_FLOOR};
use fields::{DeformedId, Evaluator, FieldError, FieldId};
use lattice::{Direction, LatticeParams, LatticePoint, ParamSelector};
use numkit::cr;
use solution::{PointData, SystemSource};

fn pt(n: i64, m: i64, h: i64) -> LatticePoint {
    LatticePoint::new(n, m, h)
}

fn guard(value: Scalar, what: &'static str) -> Result<Scalar, VerifyError> {
    if value.norm() <= DENOMINATOR_FLOOR {
        return Err(VerifyError::DegenerateDenominator {
            what,
            magnitude: value.norm(),
        });
    }
    Ok(value)
}

/// Thin field-access shorthand so the relation bodies read like the printed
/// formulas.
struct Fx<'e, S: SystemSource> {
    ev: &'e Evaluator<S>,
}

impl<'e, S: SystemSource> Fx<'e, S> {
    fn p(&self, n: i64) -> Result<Scalar, VerifyError> {
        Ok(self.ev.params().p(n)?)
    }
    fn q(&self, m: i64) -> Result<Scalar, VerifyError> {
        Ok(self.ev.params().q(m)?)
    }
    fn r(&self, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self.ev.params().r(h)?)
    }
    fn u(&self, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self.ev.field(pt(n, m, h), &FieldId::U)?)
    }
    fn v(&self, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self.ev.field(pt(n, m, h), &FieldId::V)?)
    }
    fn w(&self, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self.ev.field(pt(n, m, h), &FieldId::W)?)
    }
    fn va(&self, a: Scalar, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self
            .ev
            .field(pt(n, m, h), &FieldId::Va(ParamSelector::Constant(a)))?)
    }
    fn wb(&self, b: Scalar, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self
            .ev
            .field(pt(n, m, h), &FieldId::Wb(ParamSelector::Constant(b)))?)
    }
    fn sab(&self, a: Scalar, b: Scalar, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self.ev.master_s(pt(n, m, h), -1, -1, a, b)?)
    }
    fn sa(&self, a: Scalar, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self
            .ev
            .field(pt(n, m, h), &FieldId::Sa(ParamSelector::Constant(a)))?)
    }
    fn tb(&self, b: Scalar, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self
            .ev
            .field(pt(n, m, h), &FieldId::Tb(ParamSelector::Constant(b)))?)
    }
    fn z(&self, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self.ev.field(pt(n, m, h), &FieldId::Z)?)
    }
    fn tau(&self, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self.ev.tau(pt(n, m, h))?)
    }
    #[allow(clippy::too_many_arguments)]
    fn s(
        &self,
        i: i64,
        j: i64,
        a: Scalar,
        b: Scalar,
        n: i64,
        m: i64,
        h: i64,
    ) -> Result<Scalar, VerifyError> {
        Ok(self.ev.master_s(pt(n, m, h), i, j, a, b)?)
    }
    fn uvec(
        &self,
        i: i64,
        a: Scalar,
        n: i64,
        m: i64,
        h: i64,
    ) -> Result<numkit::CMatrix, VerifyError> {
        Ok(self.ev.uvec(pt(n, m, h), i, a)?)
    }
    fn tuvec(
        &self,
        j: i64,
        b: Scalar,
        n: i64,
        m: i64,
        h: i64,
    ) -> Result<numkit::CMatrix, VerifyError> {
        Ok(self.ev.tuvec(pt(n, m, h), j, b)?)
    }
    fn uvec0(&self, i: i64, a: Scalar, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self.uvec(i, a, n, m, h)?.get(0, 0))
    }
    fn tuvec0(&self, j: i64, b: Scalar, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self.tuvec(j, b, n, m, h)?.get(0, 0))
    }
    fn deformed(&self, id: &DeformedId, n: i64, m: i64, h: i64) -> Result<Scalar, VerifyError> {
        Ok(self.ev.deformed(pt(n, m, h), id)?)
    }
    fn data(&self, n: i64, m: i64, h: i64) -> Result<PointData, VerifyError> {
        Ok(self
            .ev
            .source()
            .data_at(pt(n, m, h))
            .map_err(FieldError::from)?)
    }
}

/// Evaluates any check at one point.
pub fn check_residual<S: SystemSource>(
    ev: &Evaluator<S>,
    id: &CheckId,
    point: LatticePoint,
) -> Result<Residual, VerifyError> {
    match id {
        CheckId::Equation(eq) => equation_residual(ev, eq, point),
        CheckId::Recurrence(rec) => recurrence_residual(ev, rec, point),
        CheckId::Miura(mi) => miura_residual(ev, mi, point),
        CheckId::Lax(family) => lax_residual(ev, *family, point),
        CheckId::PhiSum => phi_sum_residual(ev, point),
    }
}

// ===================== lattice equations =====================

/// The three interchangeable forms of the flagship equation, evaluated on
/// an arbitrary grid of u-values so that non-solutions can be probed too.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpkpForm {
    Standard,
    Alternate,
    Ratio,
}

/// Residual of one flagship form at `point`, with `u` supplied externally.
pub fn lpkp_residual_on_grid<F>(
    form: LpkpForm,
    params: &LatticeParams,
    point: LatticePoint,
    mut grid: F,
) -> Result<Residual, VerifyError>
where
    F: FnMut(LatticePoint) -> Result<Scalar, VerifyError>,
{
    let (n, m, h) = (point.n, point.m, point.h);
    let (p, q, r) = (params.p(n)?, params.q(m)?, params.r(h)?);
    let mut u = move |nn, mm, hh| grid(pt(nn, mm, hh));
    match form {
        LpkpForm::Standard => Ok(norm_terms(&[
            (p - u(n + 1, m, h)?) * (q - r + u(n + 1, m, h + 1)? - u(n + 1, m + 1, h)?),
            (q - u(n, m + 1, h)?) * (r - p + u(n + 1, m + 1, h)? - u(n, m + 1, h + 1)?),
            (r - u(n, m, h + 1)?) * (p - q + u(n, m + 1, h + 1)? - u(n + 1, m, h + 1)?),
        ])),
        LpkpForm::Alternate => Ok(norm_terms(&[
            (p + u(n, m + 1, h + 1)?) * (q - r + u(n, m, h + 1)? - u(n, m + 1, h)?),
            (q + u(n + 1, m, h + 1)?) * (r - p + u(n + 1, m, h)? - u(n, m, h + 1)?),
            (r + u(n + 1, m + 1, h)?) * (p - q + u(n, m + 1, h)? - u(n + 1, m, h)?),
        ])),
        LpkpForm::Ratio => {
            let a_ = p - r + u(n, m, h + 1)? - u(n + 1, m, h)?;
            let ah = p - r + u(n, m + 1, h + 1)? - u(n + 1, m + 1, h)?;
            let b_ = q - r + u(n, m, h + 1)? - u(n, m + 1, h)?;
            let bt = q - r + u(n + 1, m, h + 1)? - u(n + 1, m + 1, h)?;
            let cc = p - q + u(n, m + 1, h)? - u(n + 1, m, h)?;
            let cb = p - q + u(n, m + 1, h + 1)? - u(n + 1, m, h + 1)?;
            guard(a_, "ratio-form difference A")?;
            guard(b_, "ratio-form difference B")?;
            guard(cc, "ratio-form difference C")?;
            Ok(norm_terms(&[ah * b_, -(bt * a_)]).max(norm_terms(&[bt * cc, -(cb * b_)])))
        }
    }
}

pub fn equation_residual<S: SystemSource>(
    ev: &Evaluator<S>,
    id: &EquationId,
    point: LatticePoint,
) -> Result<Residual, VerifyError> {
    let f = Fx { ev };
    let (n, m, h) = (point.n, point.m, point.h);
    match *id {
        EquationId::Lpkp => {
            lpkp_residual_on_grid(LpkpForm::Standard, ev.params(), point, |x| {
                f.u(x.n, x.m, x.h)
            })
        }
        EquationId::LpkpAlt => {
            lpkp_residual_on_grid(LpkpForm::Alternate, ev.params(), point, |x| {
                f.u(x.n, x.m, x.h)
            })
        }
        EquationId::LpkpRatio => {
            lpkp_residual_on_grid(LpkpForm::Ratio, ev.params(), point, |x| f.u(x.n, x.m, x.h))
        }
        EquationId::LpmkpVaGen { a } => lpmkp_va_gen(&f, a, n, m, h),
        EquationId::LpmkpV => lpmkp_va_gen(&f, cr(0.0), n, m, h),
        EquationId::AsymVP => asym_v_p(&f, n, m, h),
        EquationId::AsymVQ => asym_v_q(&f, n, m, h),
        EquationId::AsymVR => asym_v_r(&f, n, m, h),
        EquationId::LpmkpWbGen { b } => lpmkp_wb_gen(&f, b, n, m, h),
        EquationId::LpmkpW => lpmkp_wb_gen(&f, cr(0.0), n, m, h),
        EquationId::AsymWP => asym_w_p(&f, n, m, h),
        EquationId::AsymWQ => asym_w_q(&f, n, m, h),
        EquationId::AsymWR => asym_w_r(&f, n, m, h),
        EquationId::NqcGen { a, b } | EquationId::Nqc { a, b } => nqc(&f, a, b, n, m, h),
        EquationId::Lskp => lskp(&f, n, m, h),
        EquationId::Blkp => blkp(&f, n, m, h),
        EquationId::DefX => {
            let [xt, xh, xb, xth, xtb, xhb] = def_stencil(&f, &DeformedId::X, n, m, h)?;
            Ok(norm_terms(&[
                xt * (xth - xtb),
                xh * (xhb - xth),
                xb * (xtb - xhb),
            ]))
        }
        EquationId::DefY => {
            let [yt, yh, yb, yth, ytb, yhb] = def_stencil(&f, &DeformedId::Y, n, m, h)?;
            let yth = guard(yth, "deformed y at the double n,m shift")?;
            let ytb = guard(ytb, "deformed y at the double n,h shift")?;
            let yhb = guard(yhb, "deformed y at the double m,h shift")?;
            Ok(norm_terms(&[
                (yh - yt) / yth,
                (yt - yb) / ytb,
                (yb - yh) / yhb,
            ]))
        }
        EquationId::DefYp => {
            let [yt, yh, yb, yth, ytb, yhb] = def_stencil(&f, &DeformedId::Yp, n, m, h)?;
            let r1 = norm_terms(&[(yth - yhb) * yt * (yh - yb), -((yth - ytb) * yh * (yt - yb))]);
            let r2 = norm_terms(&[(yth - ytb) * yb * (yt - yh), -((ytb - yhb) * yt * (yh - yb))]);
            Ok(r1.max(r2))
        }
        EquationId::DefXi => {
            let [xt, xh, xb, xth, xtb, xhb] = def_stencil(&f, &DeformedId::Xi, n, m, h)?;
            let xth = guard(xth, "deformed xi at the double n,m shift")?;
            let xtb = guard(xtb, "deformed xi at the double n,h shift")?;
            let xhb = guard(xhb, "deformed xi at the double m,h shift")?;
            Ok(norm_terms(&[xt / xth, xt / xtb, -((xh + xb) / xhb)]))
        }
        EquationId::DefEta => {
            let [et, eh, eb, eth, etb, ehb] = def_stencil(&f, &DeformedId::Eta, n, m, h)?;
            Ok(norm_terms(&[ehb * et * (eh - eb), -((eth - etb) * eh * eb)]))
        }
        EquationId::DefZp { a, b } => {
            let [zt, zh, zb, zth, ztb, zhb] = def_stencil(&f, &DeformedId::Zp { a, b }, n, m, h)?;
            Ok(norm_terms(&[
                (zh - zth) * (zt - ztb) * (zb - zhb),
                -((zt - zth) * (zb - ztb) * (zh - zhb)),
            ]))
        }
        EquationId::DefSigma => {
            let [st, sh, sb, sth, stb, shb] = def_stencil(&f, &DeformedId::Sigma, n, m, h)?;
            Ok(norm_terms(&[sth * sb, shb * st, stb * sh]))
        }
        EquationId::AutLpkp
        | EquationId::AutLpmkpI
        | EquationId::AutLpmkpII
        | EquationId::AutAsymI
        | EquationId::AutAsymII
        | EquationId::AutNqc { .. }
        | EquationId::AutBlkp => autonomous_residual(&f, id, n, m, h),
    }
}

fn lpmkp_va_gen<S: SystemSource>(
    f: &Fx<S>,
    a: Scalar,
    n: i64,
    m: i64,
    h: i64,
) -> Result<Residual, VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let va = |nn, mm, hh| f.va(a, nn, mm, hh);
    let d1 = guard(va(n + 1, m + 1, h)?, "va at the double n,m shift")?;
    let d2 = guard(va(n + 1, m, h + 1)?, "va at the double n,h shift")?;
    let d3 = guard(va(n, m + 1, h + 1)?, "va at the double m,h shift")?;
    Ok(norm_terms(&[
        ((p - a) * va(n, m + 1, h)? - (q - a) * va(n + 1, m, h)?) / d1,
        ((r - a) * va(n + 1, m, h)? - (p - a) * va(n, m, h + 1)?) / d2,
        ((q - a) * va(n, m, h + 1)? - (r - a) * va(n, m + 1, h)?) / d3,
    ]))
}

fn asym_v_p<S: SystemSource>(
    f: &Fx<S>,
    n: i64,
    m: i64,
    h: i64,
) -> Result<Residual, VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let (a0, at) = (f.p(n - 1)?, f.p(n)?);
    let d1 = guard(f.va(at, n + 1, m + 1, h)?, "va at the double n,m shift")?;
    let d2 = guard(f.va(at, n + 1, m, h + 1)?, "va at the double n,h shift")?;
    let d3 = guard(f.va(a0, n, m + 1, h + 1)?, "va at the double m,h shift")?;
    Ok(norm_terms(&[
        (p - q) * f.va(at, n + 1, m, h)? / d1,
        (r - p) * f.va(at, n + 1, m, h)? / d2,
        ((q - a0) * f.va(a0, n, m, h + 1)? - (r - a0) * f.va(a0, n, m + 1, h)?) / d3,
    ]))
}

fn asym_v_q<S: SystemSource>(
    f: &Fx<S>,
    n: i64,
    m: i64,
    h: i64,
) -> Result<Residual, VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let (a0, ah) = (f.q(m - 1)?, f.q(m)?);
    let d1 = guard(f.va(ah, n + 1, m + 1, h)?, "va at the double n,m shift")?;
    let d2 = guard(f.va(a0, n + 1, m, h + 1)?, "va at the double n,h shift")?;
    let d3 = guard(f.va(ah, n, m + 1, h + 1)?, "va at the double m,h shift")?;
    Ok(norm_terms(&[
        (p - q) * f.va(ah, n, m + 1, h)? / d1,
        ((r - a0) * f.va(a0, n + 1, m, h)? - (p - a0) * f.va(a0, n, m, h + 1)?) / d2,
        (q - r) * f.va(ah, n, m + 1, h)? / d3,
    ]))
}

fn asym_v_r<S: SystemSource>(
    f: &Fx<S>,
    n: i64,
    m: i64,
    h: i64,
) -> Result<Residual, VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let (a0, ab) = (f.r(h - 1)?, f.r(h)?);
    let d1 = guard(f.va(a0, n + 1, m + 1, h)?, "va at the double n,m shift")?;
    let d2 = guard(f.va(ab, n + 1, m, h + 1)?, "va at the double n,h shift")?;
    let d3 = guard(f.va(ab, n, m + 1, h + 1)?, "va at the double m,h shift")?;
    Ok(norm_terms(&[
        ((p - a0) * f.va(a0, n, m + 1, h)? - (q - a0) * f.va(a0, n + 1, m, h)?) / d1,
        (r - p) * f.va(ab, n, m, h + 1)? / d2,
        (q - r) * f.va(ab, n, m, h + 1)? / d3,
    ]))
}

fn lpmkp_wb_gen<S: SystemSource>(
    f: &Fx<S>,
    b: Scalar,
    n: i64,
    m: i64,
    h: i64,
) -> Result<Residual, VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let w = |nn, mm, hh| f.wb(b, nn, mm, hh);
    let a_ = (p + b) * w(n + 1, m, h)? - (r + b) * w(n, m, h + 1)?;
    let ah = (p + b) * w(n + 1, m + 1, h)? - (r + b) * w(n, m + 1, h + 1)?;
    let b_ = (q + b) * w(n, m + 1, h)? - (r + b) * w(n, m, h + 1)?;
    let bt = (q + b) * w(n + 1, m + 1, h)? - (r + b) * w(n + 1, m, h + 1)?;
    let cc = (p + b) * w(n + 1, m, h)? - (q + b) * w(n, m + 1, h)?;
    let cb = (p + b) * w(n + 1, m, h + 1)? - (q + b) * w(n, m + 1, h + 1)?;
    let r1 = norm_terms(&[ah * w(n + 1, m, h)? * b_, -(bt * w(n, m + 1, h)? * a_)]);
    let r2 = norm_terms(&[bt * w(n, m, h + 1)? * cc, -(cb * w(n + 1, m, h)? * b_)]);
    Ok(r1.max(r2))
}

fn asym_w_p<S: SystemSource>(
    f: &Fx<S>,
    n: i64,
    m: i64,
    h: i64,
) -> Result<Residual, VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let b0 = -f.p(n)?;
    let w = |nn, mm, hh| f.wb(b0, nn, mm, hh);
    Ok(norm_terms(&[
        w(n, m + 1, h + 1)?
            * w(n + 1, m, h)?
            * ((q - p) * w(n, m + 1, h)? - (r - p) * w(n, m, h + 1)?),
        -(((q - p) * w(n + 1, m + 1, h)? - (r - p) * w(n + 1, m, h + 1)?)
            * w(n, m + 1, h)?
            * w(n, m, h + 1)?),
    ]))
}

fn asym_w_q<S: SystemSource>(
    f: &Fx<S>,
    n: i64,
    m: i64,
    h: i64,
) -> Result<Residual, VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let b0 = -f.q(m)?;
    let w = |nn, mm, hh| f.wb(b0, nn, mm, hh);
    Ok(norm_terms(&[
        w(n + 1, m, h + 1)?
            * w(n, m + 1, h)?
            * ((p - q) * w(n + 1, m, h)? - (r - q) * w(n, m, h + 1)?),
        -(((p - q) * w(n + 1, m + 1, h)? - (r - q) * w(n, m + 1, h + 1)?)
            * w(n + 1, m, h)?
            * w(n, m, h + 1)?),
    ]))
}

fn asym_w_r<S: SystemSource>(
    f: &Fx<S>,
    n: i64,
    m: i64,
    h: i64,
) -> Result<Residual, VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let b0 = -f.r(h)?;
    let w = |nn, mm, hh| f.wb(b0, nn, mm, hh);
    Ok(norm_terms(&[
        w(n + 1, m + 1, h)?
            * w(n, m, h + 1)?
            * ((p - r) * w(n + 1, m, h)? - (q - r) * w(n, m + 1, h)?),
        -(((p - r) * w(n + 1, m, h + 1)? - (q - r) * w(n, m + 1, h + 1)?)
            * w(n + 1, m, h)?
            * w(n, m + 1, h)?),
    ]))
}

fn nqc<S: SystemSource>(
    f: &Fx<S>,
    a: Scalar,
    b: Scalar,
    n: i64,
    m: i64,
    h: i64,
) -> Result<Residual, VerifyError> {
    let s_ab = |nn, mm, hh| f.sab(a, b, nn, mm, hh);
    let ep = |nn: i64, mm: i64, hh: i64| -> Result<Scalar, VerifyError> {
        Ok(cr(1.0) + (f.p(nn)? - a) * s_ab(nn, mm, hh)? - (f.p(nn)? + b) * s_ab(nn + 1, mm, hh)?)
    };
    let eq_ = |nn: i64, mm: i64, hh: i64| -> Result<Scalar, VerifyError> {
        Ok(cr(1.0) + (f.q(mm)? - a) * s_ab(nn, mm, hh)? - (f.q(mm)? + b) * s_ab(nn, mm + 1, hh)?)
    };
    let er = |nn: i64, mm: i64, hh: i64| -> Result<Scalar, VerifyError> {
        Ok(cr(1.0) + (f.r(hh)? - a) * s_ab(nn, mm, hh)? - (f.r(hh)? + b) * s_ab(nn, mm, hh + 1)?)
    };
    Ok(norm_terms(&[
        ep(n, m + 1, h)? * er(n + 1, m, h)? * eq_(n, m, h + 1)?,
        -(ep(n, m, h + 1)? * eq_(n + 1, m, h)? * er(n, m + 1, h)?),
    ]))
}

fn lskp<S: SystemSource>(f: &Fx<S>, n: i64, m: i64, h: i64) -> Result<Residual, VerifyError> {
    let zt = f.z(n + 1, m, h)?;
    let zh = f.z(n, m + 1, h)?;
    let zb = f.z(n, m, h + 1)?;
    let zth = f.z(n + 1, m + 1, h)?;
    let ztb = f.z(n + 1, m, h + 1)?;
    let zhb = f.z(n, m + 1, h + 1)?;
    for (d, what) in [
        (zh - zth, "z difference across the n shift of zh"),
        (zt - ztb, "z difference across the h shift of zt"),
        (zb - zhb, "z difference across the m shift of zb"),
        (zt - zth, "z difference across the m shift of zt"),
        (zb - ztb, "z difference across the n shift of zb"),
        (zh - zhb, "z difference across the h shift of zh"),
    ] {
        guard(d, what)?;
    }
    Ok(norm_terms(&[
        (zh - zth) * (zt - ztb) * (zb - zhb),
        -((zt - zth) * (zb - ztb) * (zh - zhb)),
    ]))
}

fn blkp<S: SystemSource>(f: &Fx<S>, n: i64, m: i64, h: i64) -> Result<Residual, VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let t = |nn, mm, hh| f.tau(nn, mm, hh);
    Ok(norm_terms(&[
        (p - q) * t(n + 1, m + 1, h)? * t(n, m, h + 1)?,
        (q - r) * t(n, m + 1, h + 1)? * t(n + 1, m, h)?,
        (r - p) * t(n + 1, m, h + 1)? * t(n, m + 1, h)?,
    ]))
}

/// The six forward stencil values of a deformed field, in the order
/// (n+1), (m+1), (h+1), (n+1,m+1), (n+1,h+1), (m+1,h+1).
fn def_stencil<S: SystemSource>(
    f: &Fx<S>,
    id: &DeformedId,
    n: i64,
    m: i64,
    h: i64,
) -> Result<[Scalar; 6], VerifyError> {
    Ok([
        f.deformed(id, n + 1, m, h)?,
        f.deformed(id, n, m + 1, h)?,
        f.deformed(id, n, m, h + 1)?,
        f.deformed(id, n + 1, m + 1, h)?,
        f.deformed(id, n + 1, m, h + 1)?,
        f.deformed(id, n, m + 1, h + 1)?,
    ])
}

fn autonomous_residual<S: SystemSource>(
    f: &Fx<S>,
    id: &EquationId,
    n: i64,
    m: i64,
    h: i64,
) -> Result<Residual, VerifyError> {
    let params = f.ev.params();
    if !Direction::ALL
        .iter()
        .all(|dir| params.is_constant(*dir))
    {
        return Err(VerifyError::NonConstantSequences {
            check: id.to_string(),
        });
    }
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    match *id {
        EquationId::AutLpkp => {
            let u = |nn, mm, hh| f.u(nn, mm, hh);
            Ok(norm_terms(&[
                (p - u(n + 1, m, h)?) * (q - r + u(n + 1, m, h + 1)? - u(n + 1, m + 1, h)?),
                (q - u(n, m + 1, h)?) * (r - p + u(n + 1, m + 1, h)? - u(n, m + 1, h + 1)?),
                (r - u(n, m, h + 1)?) * (p - q + u(n, m + 1, h + 1)? - u(n + 1, m, h + 1)?),
            ]))
        }
        EquationId::AutLpmkpI => {
            let v = |nn, mm, hh| f.v(nn, mm, hh);
            let d1 = guard(v(n + 1, m + 1, h)?, "v at the double n,m shift")?;
            let d2 = guard(v(n + 1, m, h + 1)?, "v at the double n,h shift")?;
            let d3 = guard(v(n, m + 1, h + 1)?, "v at the double m,h shift")?;
            Ok(norm_terms(&[
                (p * v(n, m + 1, h)? - q * v(n + 1, m, h)?) / d1,
                (r * v(n + 1, m, h)? - p * v(n, m, h + 1)?) / d2,
                (q * v(n, m, h + 1)? - r * v(n, m + 1, h)?) / d3,
            ]))
        }
        EquationId::AutLpmkpII => {
            let w = |nn, mm, hh| f.w(nn, mm, hh);
            let a_ = p * w(n + 1, m, h)? - r * w(n, m, h + 1)?;
            let ah = p * w(n + 1, m + 1, h)? - r * w(n, m + 1, h + 1)?;
            let b_ = q * w(n, m + 1, h)? - r * w(n, m, h + 1)?;
            let bt = q * w(n + 1, m + 1, h)? - r * w(n + 1, m, h + 1)?;
            let cc = p * w(n + 1, m, h)? - q * w(n, m + 1, h)?;
            let cb = p * w(n + 1, m, h + 1)? - q * w(n, m + 1, h + 1)?;
            let r1 = norm_terms(&[ah * w(n + 1, m, h)? * b_, -(bt * w(n, m + 1, h)? * a_)]);
            let r2 = norm_terms(&[bt * w(n, m, h + 1)? * cc, -(cb * w(n + 1, m, h)? * b_)]);
            Ok(r1.max(r2))
        }
        EquationId::AutAsymI => {
            let vp = |nn, mm, hh| f.va(p, nn, mm, hh);
            let d1 = guard(vp(n + 1, m + 1, h)?, "va at the double n,m shift")?;
            let d2 = guard(vp(n + 1, m, h + 1)?, "va at the double n,h shift")?;
            let d3 = guard(vp(n, m + 1, h + 1)?, "va at the double m,h shift")?;
            Ok(norm_terms(&[
                (p - q) * vp(n + 1, m, h)? / d1,
                (r - p) * vp(n + 1, m, h)? / d2,
                ((q - p) * vp(n, m, h + 1)? - (r - p) * vp(n, m + 1, h)?) / d3,
            ]))
        }
        EquationId::AutAsymII => {
            let wp = |nn, mm, hh| f.wb(-p, nn, mm, hh);
            Ok(norm_terms(&[
                wp(n, m + 1, h + 1)?
                    * wp(n + 1, m, h)?
                    * ((q - p) * wp(n, m + 1, h)? - (r - p) * wp(n, m, h + 1)?),
                -(((q - p) * wp(n + 1, m + 1, h)? - (r - p) * wp(n + 1, m, h + 1)?)
                    * wp(n, m + 1, h)?
                    * wp(n, m, h + 1)?),
            ]))
        }
        EquationId::AutNqc { a, b } => {
            let s_ab = |nn, mm, hh| f.sab(a, b, nn, mm, hh);
            let ep = |nn: i64, mm: i64, hh: i64| -> Result<Scalar, VerifyError> {
                Ok(cr(1.0) + (p - a) * s_ab(nn, mm, hh)? - (p + b) * s_ab(nn + 1, mm, hh)?)
            };
            let eq_ = |nn: i64, mm: i64, hh: i64| -> Result<Scalar, VerifyError> {
                Ok(cr(1.0) + (q - a) * s_ab(nn, mm, hh)? - (q + b) * s_ab(nn, mm + 1, hh)?)
            };
            let er = |nn: i64, mm: i64, hh: i64| -> Result<Scalar, VerifyError> {
                Ok(cr(1.0) + (r - a) * s_ab(nn, mm, hh)? - (r + b) * s_ab(nn, mm, hh + 1)?)
            };
            Ok(norm_terms(&[
                ep(n, m + 1, h)? * er(n + 1, m, h)? * eq_(n, m, h + 1)?,
                -(ep(n, m, h + 1)? * eq_(n + 1, m, h)? * er(n, m + 1, h)?),
            ]))
        }
        EquationId::AutBlkp => {
            let t = |nn, mm, hh| f.tau(nn, mm, hh);
            Ok(norm_terms(&[
                (p - q) * t(n + 1, m + 1, h)? * t(n, m, h + 1)?,
                (q - r) * t(n, m + 1, h + 1)? * t(n + 1, m, h)?,
                (r - p) * t(n + 1, m, h + 1)? * t(n, m + 1, h)?,
            ]))
        }
        _ => unreachable!("autonomous_residual only handles AUT ids"),
    }
}

// ===================== one-step recurrences =====================

pub fn recurrence_residual<S: SystemSource>(
    ev: &Evaluator<S>,
    id: &RecurrenceId,
    point: LatticePoint,
) -> Result<Residual, VerifyError> {
    let f = Fx { ev };
    let (n, m, h) = (point.n, point.m, point.h);
    let zero = cr(0.0);
    let dirs = [
        (f.p(n)?, (1, 0, 0)),
        (f.q(m)?, (0, 1, 0)),
        (f.r(h)?, (0, 0, 1)),
    ];
    let mut worst = Residual::default();
    for (pp, (dn, dm, dh)) in dirs {
        let (n1, m1, h1) = (n + dn, m + dm, h + dh);
        let res = match *id {
            RecurrenceId::MDyna => {
                let here = f.data(n, m, h)?;
                let there = f.data(n1, m1, h1)?;
                let outer = here.r.matmul(&there.s).scale(-(cr(1.0) / pp));
                let neg_m = here.m.scale(cr(-1.0));
                norm_matrix_terms(&[&there.m, &neg_m, &outer])
            }
            RecurrenceId::UDyna { i, a } => {
                let t1 = f.uvec(i, a, n1, m1, h1)?.scale(pp);
                let t2 = f.uvec(i, a, n, m, h)?.scale(-(pp - a));
                let t3 = f.uvec(i + 1, a, n, m, h)?.scale(cr(-1.0));
                let coupling = f.s(i, 0, a, zero, n1, m1, h1)?;
                let t4 = f.uvec(0, zero, n, m, h)?.scale(coupling);
                norm_matrix_terms(&[&t1, &t2, &t3, &t4])
            }
            RecurrenceId::TuDyna { j, b } => {
                let t1 = f.tuvec(j, b, n, m, h)?.scale(pp);
                let t2 = f.tuvec(j, b, n1, m1, h1)?.scale(-(pp + b));
                let t3 = f.tuvec(j + 1, b, n1, m1, h1)?;
                let coupling = f.s(0, j, zero, b, n, m, h)?;
                let t4 = f.tuvec(0, zero, n1, m1, h1)?.scale(-coupling);
                norm_matrix_terms(&[&t1, &t2, &t3, &t4])
            }
            RecurrenceId::SDyna { i, j, a, b } => norm_terms(&[
                (pp + b) * f.s(i, j, a, b, n1, m1, h1)?,
                -f.s(i, j + 1, a, b, n1, m1, h1)?,
                -((pp - a) * f.s(i, j, a, b, n, m, h)?),
                -f.s(i + 1, j, a, b, n, m, h)?,
                f.s(i, 0, a, b, n1, m1, h1)? * f.s(0, j, a, b, n, m, h)?,
            ]),
            RecurrenceId::VaDyna { a } => norm_terms(&[
                f.sa(a, n1, m1, h1)?,
                -((pp + f.u(n, m, h)?) * f.va(a, n1, m1, h1)?),
                (pp - a) * f.va(a, n, m, h)?,
            ]),
            RecurrenceId::WbDyna { b } => norm_terms(&[
                f.tb(b, n, m, h)?,
                (pp + b) * f.wb(b, n1, m1, h1)?,
                -((pp - f.u(n1, m1, h1)?) * f.wb(b, n, m, h)?),
            ]),
            RecurrenceId::SabDyna { a, b } => norm_terms(&[
                cr(1.0),
                (pp - a) * f.sab(a, b, n, m, h)?,
                -((pp + b) * f.sab(a, b, n1, m1, h1)?),
                -(f.va(a, n1, m1, h1)? * f.wb(b, n, m, h)?),
            ]),
        };
        worst = worst.max(res);
    }
    Ok(worst)
}

// ===================== Miura maps and τ relations =====================

pub fn miura_residual<S: SystemSource>(
    ev: &Evaluator<S>,
    id: &MiuraId,
    point: LatticePoint,
) -> Result<Residual, VerifyError> {
    let f = Fx { ev };
    let (n, m, h) = (point.n, point.m, point.h);
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    match *id {
        MiuraId::Mu1 { a } => {
            let u = |nn, mm, hh| f.u(nn, mm, hh);
            let va = |nn, mm, hh| f.va(a, nn, mm, hh);
            let r1 = norm_terms(&[
                (p - q + u(n, m + 1, h)? - u(n + 1, m, h)?) * va(n + 1, m + 1, h)?,
                -((p - a) * va(n, m + 1, h)?),
                (q - a) * va(n + 1, m, h)?,
            ]);
            let r2 = norm_terms(&[
                (r - p + u(n + 1, m, h)? - u(n, m, h + 1)?) * va(n + 1, m, h + 1)?,
                -((r - a) * va(n + 1, m, h)?),
                (p - a) * va(n, m, h + 1)?,
            ]);
            let r3 = norm_terms(&[
                (q - r + u(n, m, h + 1)? - u(n, m + 1, h)?) * va(n, m + 1, h + 1)?,
                -((q - a) * va(n, m, h + 1)?),
                (r - a) * va(n, m + 1, h)?,
            ]);
            Ok(r1.max(r2).max(r3))
        }
        MiuraId::Mu2 { b } => {
            let u = |nn, mm, hh| f.u(nn, mm, hh);
            let w = |nn, mm, hh| f.wb(b, nn, mm, hh);
            let r1 = norm_terms(&[
                (p - q + u(n, m + 1, h)? - u(n + 1, m, h)?) * w(n, m, h)?,
                -((p + b) * w(n + 1, m, h)?),
                (q + b) * w(n, m + 1, h)?,
            ]);
            let r2 = norm_terms(&[
                (r - p + u(n + 1, m, h)? - u(n, m, h + 1)?) * w(n, m, h)?,
                -((r + b) * w(n, m, h + 1)?),
                (p + b) * w(n + 1, m, h)?,
            ]);
            let r3 = norm_terms(&[
                (q - r + u(n, m, h + 1)? - u(n, m + 1, h)?) * w(n, m, h)?,
                -((q + b) * w(n, m + 1, h)?),
                (r + b) * w(n, m, h + 1)?,
            ]);
            Ok(r1.max(r2).max(r3))
        }
        MiuraId::UTau => {
            let u = |nn, mm, hh| f.u(nn, mm, hh);
            let t = |nn, mm, hh| f.tau(nn, mm, hh);
            let r1 = norm_terms(&[
                (p - q + u(n, m + 1, h)? - u(n + 1, m, h)?) * t(n + 1, m, h)? * t(n, m + 1, h)?,
                -((p - q) * t(n + 1, m + 1, h)? * t(n, m, h)?),
            ]);
            let r2 = norm_terms(&[
                (r - p + u(n + 1, m, h)? - u(n, m, h + 1)?) * t(n, m, h + 1)? * t(n + 1, m, h)?,
                -((r - p) * t(n + 1, m, h + 1)? * t(n, m, h)?),
            ]);
            let r3 = norm_terms(&[
                (q - r + u(n, m, h + 1)? - u(n, m + 1, h)?) * t(n, m + 1, h)? * t(n, m, h + 1)?,
                -((q - r) * t(n, m + 1, h + 1)? * t(n, m, h)?),
            ]);
            Ok(r1.max(r2).max(r3))
        }
        MiuraId::TauVw => {
            let t = |nn, mm, hh| f.tau(nn, mm, hh);
            let r1 = norm_terms(&[t(n + 1, m, h)?, -(t(n, m, h)? * f.wb(-p, n, m, h)?)]);
            let r2 = norm_terms(&[t(n + 1, m, h)? * f.va(p, n + 1, m, h)?, -t(n, m, h)?]);
            let r3 = norm_terms(&[t(n, m + 1, h)?, -(t(n, m, h)? * f.wb(-q, n, m, h)?)]);
            let r4 = norm_terms(&[t(n, m + 1, h)? * f.va(q, n, m + 1, h)?, -t(n, m, h)?]);
            let r5 = norm_terms(&[t(n, m, h + 1)?, -(t(n, m, h)? * f.wb(-r, n, m, h)?)]);
            let r6 = norm_terms(&[t(n, m, h + 1)? * f.va(r, n, m, h + 1)?, -t(n, m, h)?]);
            Ok(r1.max(r2).max(r3).max(r4).max(r5).max(r6))
        }
    }
}

// ===================== Lax linear systems =====================

/// The three potential coefficients built from u at one point.
fn phi<S: SystemSource>(
    f: &Fx<S>,
    n: i64,
    m: i64,
    h: i64,
) -> Result<(Scalar, Scalar, Scalar), VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    Ok((
        q - r + f.u(n, m, h + 1)? - f.u(n, m + 1, h)?,
        r - p + f.u(n + 1, m, h)? - f.u(n, m, h + 1)?,
        p - q + f.u(n, m + 1, h)? - f.u(n + 1, m, h)?,
    ))
}

/// Max residual of the three forward relations on a column eigenfunction.
#[allow(clippy::too_many_arguments)]
fn forward_system<E>(
    p: Scalar,
    q: Scalar,
    r: Scalar,
    coeffs: (Scalar, Scalar, Scalar),
    n: i64,
    m: i64,
    h: i64,
    mut x: E,
) -> Result<Residual, VerifyError>
where
    E: FnMut(i64, i64, i64) -> Result<Scalar, VerifyError>,
{
    let (f1, f2, f3) = coeffs;
    let r1 = norm_terms(&[
        p * x(n + 1, m, h)?,
        -(q * x(n, m + 1, h)?),
        -(f3 * x(n, m, h)?),
    ]);
    let r2 = norm_terms(&[
        q * x(n, m + 1, h)?,
        -(r * x(n, m, h + 1)?),
        -(f1 * x(n, m, h)?),
    ]);
    let r3 = norm_terms(&[
        r * x(n, m, h + 1)?,
        -(p * x(n + 1, m, h)?),
        -(f2 * x(n, m, h)?),
    ]);
    Ok(r1.max(r2).max(r3))
}

/// Max residual of the three adjoint relations on a row eigenfunction.
#[allow(clippy::too_many_arguments)]
fn adjoint_system<E>(
    p: Scalar,
    q: Scalar,
    r: Scalar,
    coeffs: (Scalar, Scalar, Scalar),
    n: i64,
    m: i64,
    h: i64,
    mut y: E,
) -> Result<Residual, VerifyError>
where
    E: FnMut(i64, i64, i64) -> Result<Scalar, VerifyError>,
{
    let (f1, f2, f3) = coeffs;
    let r1 = norm_terms(&[
        p * y(n, m + 1, h)?,
        -(q * y(n + 1, m, h)?),
        -(f3 * y(n + 1, m + 1, h)?),
    ]);
    let r2 = norm_terms(&[
        q * y(n, m, h + 1)?,
        -(r * y(n, m + 1, h)?),
        -(f1 * y(n, m + 1, h + 1)?),
    ]);
    let r3 = norm_terms(&[
        r * y(n + 1, m, h)?,
        -(p * y(n, m, h + 1)?),
        -(f2 * y(n + 1, m, h + 1)?),
    ]);
    Ok(r1.max(r2).max(r3))
}

fn tau_coefficients<S: SystemSource>(
    f: &Fx<S>,
    n: i64,
    m: i64,
    h: i64,
) -> Result<(Scalar, Scalar, Scalar), VerifyError> {
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let t = |nn, mm, hh| f.tau(nn, mm, hh);
    let d1 = guard(t(n, m, h + 1)? * t(n, m + 1, h)?, "tau pair under f1")?;
    let d2 = guard(t(n, m, h + 1)? * t(n + 1, m, h)?, "tau pair under f2")?;
    let d3 = guard(t(n + 1, m, h)? * t(n, m + 1, h)?, "tau pair under f3")?;
    Ok((
        (q - r) * t(n, m + 1, h + 1)? * t(n, m, h)? / d1,
        (r - p) * t(n + 1, m, h + 1)? * t(n, m, h)? / d2,
        (p - q) * t(n + 1, m + 1, h)? * t(n, m, h)? / d3,
    ))
}

pub fn lax_residual<S: SystemSource>(
    ev: &Evaluator<S>,
    family: LaxFamily,
    point: LatticePoint,
) -> Result<Residual, VerifyError> {
    let f = Fx { ev };
    let (n, m, h) = (point.n, point.m, point.h);
    let zero = cr(0.0);
    match family {
        LaxFamily::U => {
            let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
            let coeffs = phi(&f, n, m, h)?;
            forward_system(p, q, r, coeffs, n, m, h, |nn, mm, hh| {
                f.uvec0(0, zero, nn, mm, hh)
            })
        }
        LaxFamily::TU => {
            let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
            let coeffs = phi(&f, n, m, h)?;
            adjoint_system(p, q, r, coeffs, n, m, h, |nn, mm, hh| {
                f.tuvec0(0, zero, nn, mm, hh)
            })
        }
        LaxFamily::BlkpU => {
            let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
            let coeffs = tau_coefficients(&f, n, m, h)?;
            forward_system(p, q, r, coeffs, n, m, h, |nn, mm, hh| {
                f.uvec0(0, zero, nn, mm, hh)
            })
        }
        LaxFamily::BlkpTu => {
            let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
            let coeffs = tau_coefficients(&f, n, m, h)?;
            adjoint_system(p, q, r, coeffs, n, m, h, |nn, mm, hh| {
                f.tuvec0(0, zero, nn, mm, hh)
            })
        }
        LaxFamily::V => {
            let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
            let vv = f.v(n, m, h)?;
            let vt = guard(f.v(n + 1, m, h)?, "v after the n shift")?;
            let vh = guard(f.v(n, m + 1, h)?, "v after the m shift")?;
            let vb = guard(f.v(n, m, h + 1)?, "v after the h shift")?;
            let coeffs = (
                (q / vh - r / vb) * vv,
                (r / vb - p / vt) * vv,
                (p / vt - q / vh) * vv,
            );
            forward_system(p, q, r, coeffs, n, m, h, |nn, mm, hh| {
                let d = guard(f.v(nn, mm, hh)?, "v under the eigenfunction")?;
                Ok(f.uvec0(-1, zero, nn, mm, hh)? / d)
            })
        }
        LaxFamily::VAsym => {
            let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
            let a0 = f.p(n - 1)?;
            let vv = f.va(a0, n, m, h)?;
            let dh = guard(f.va(a0, n, m + 1, h)?, "va after the m shift")?;
            let db = guard(f.va(a0, n, m, h + 1)?, "va after the h shift")?;
            let coeffs = (
                ((q - a0) / dh - (r - a0) / db) * vv,
                (r - a0) * vv / db,
                -((q - a0) * vv / dh),
            );
            forward_system(p, q, r, coeffs, n, m, h, |nn, mm, hh| {
                let aa = f.p(nn - 1)?;
                let d = guard(f.va(aa, nn, mm, hh)?, "va under the eigenfunction")?;
                Ok(f.uvec0(-1, aa, nn, mm, hh)? / d)
            })
        }
        LaxFamily::W => {
            let (pm, qm, rm) = (f.p(n - 1)?, f.q(m - 1)?, f.r(h - 1)?);
            let ww = f.w(n, m, h)?;
            let dt = guard(f.w(n - 1, m, h)?, "w before the n shift")?;
            let dh = guard(f.w(n, m - 1, h)?, "w before the m shift")?;
            let db = guard(f.w(n, m, h - 1)?, "w before the h shift")?;
            let c1 = (qm / dh - rm / db) * ww;
            let c2 = (rm / db - pm / dt) * ww;
            let c3 = (pm / dt - qm / dh) * ww;
            let y = |nn: i64, mm: i64, hh: i64| -> Result<Scalar, VerifyError> {
                let d = guard(f.w(nn, mm, hh)?, "w under the eigenfunction")?;
                Ok(f.tuvec0(-1, zero, nn, mm, hh)? / d)
            };
            let r1 = norm_terms(&[
                pm * y(n - 1, m, h)?,
                -(qm * y(n, m - 1, h)?),
                -(c3 * y(n, m, h)?),
            ]);
            let r2 = norm_terms(&[
                qm * y(n, m - 1, h)?,
                -(rm * y(n, m, h - 1)?),
                -(c1 * y(n, m, h)?),
            ]);
            let r3 = norm_terms(&[
                rm * y(n, m, h - 1)?,
                -(pm * y(n - 1, m, h)?),
                -(c2 * y(n, m, h)?),
            ]);
            Ok(r1.max(r2).max(r3))
        }
        LaxFamily::WAsym => {
            let (pm, qm, rm) = (f.p(n - 1)?, f.q(m - 1)?, f.r(h - 1)?);
            let b0 = -f.p(n)?;
            let ww = f.wb(b0, n, m, h)?;
            let dh = guard(f.wb(b0, n, m - 1, h)?, "wb before the m shift")?;
            let db = guard(f.wb(b0, n, m, h - 1)?, "wb before the h shift")?;
            let s1 = ((qm + b0) / dh - (rm + b0) / db) * ww;
            let s2 = (rm + b0) * ww / db;
            let s3 = -((qm + b0) * ww / dh);
            let y = |nn: i64, mm: i64, hh: i64| -> Result<Scalar, VerifyError> {
                let bb = -f.p(nn)?;
                let d = guard(f.wb(bb, nn, mm, hh)?, "wb under the eigenfunction")?;
                Ok(f.tuvec0(-1, bb, nn, mm, hh)? / d)
            };
            let r1 = norm_terms(&[
                pm * y(n - 1, m, h)?,
                -(qm * y(n, m - 1, h)?),
                -(s3 * y(n, m, h)?),
            ]);
            let r2 = norm_terms(&[
                qm * y(n, m - 1, h)?,
                -(rm * y(n, m, h - 1)?),
                -(s1 * y(n, m, h)?),
            ]);
            let r3 = norm_terms(&[
                rm * y(n, m, h - 1)?,
                -(pm * y(n - 1, m, h)?),
                -(s2 * y(n, m, h)?),
            ]);
            Ok(r1.max(r2).max(r3))
        }
    }
}

/// The telescoping identity: the first coefficient after an n shift, the
/// second after an m shift, and the third after an h shift sum to zero by
/// construction.
pub fn phi_sum_residual<S: SystemSource>(
    ev: &Evaluator<S>,
    point: LatticePoint,
) -> Result<Residual, VerifyError> {
    let f = Fx { ev };
    let (n, m, h) = (point.n, point.m, point.h);
    let (p, q, r) = (f.p(n)?, f.q(m)?, f.r(h)?);
    let t1 = q - r + f.u(n + 1, m, h + 1)? - f.u(n + 1, m + 1, h)?;
    let t2 = r - p + f.u(n + 1, m + 1, h)? - f.u(n, m + 1, h + 1)?;
    let t3 = p - q + f.u(n, m + 1, h + 1)? - f.u(n + 1, m, h + 1)?;
    Ok(norm_terms(&[t1, t2, t3]))
}
