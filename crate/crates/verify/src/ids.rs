//! Check identifiers: typed names for every verifiable relation, with a
//! stable text form used by configs, reports, and the command line.

use crate::{Scalar, VerifyError};
use numkit::cr;
use std::fmt;

/// Lattice equations (including deformed and autonomous forms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquationId {
    Lpkp,
    LpkpAlt,
    LpkpRatio,
    LpmkpVaGen { a: Scalar },
    LpmkpV,
    AsymVP,
    AsymVQ,
    AsymVR,
    LpmkpWbGen { b: Scalar },
    LpmkpW,
    AsymWP,
    AsymWQ,
    AsymWR,
    NqcGen { a: Scalar, b: Scalar },
    Nqc { a: Scalar, b: Scalar },
    Lskp,
    Blkp,
    DefX,
    DefY,
    DefYp,
    DefXi,
    DefEta,
    DefZp { a: Scalar, b: Scalar },
    DefSigma,
    AutLpkp,
    AutLpmkpI,
    AutLpmkpII,
    AutAsymI,
    AutAsymII,
    AutNqc { a: Scalar, b: Scalar },
    AutBlkp,
}

/// One-step evolutions of the solution data and derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RecurrenceId {
    MDyna,
    UDyna { i: i64, a: Scalar },
    TuDyna { j: i64, b: Scalar },
    SDyna { i: i64, j: i64, a: Scalar, b: Scalar },
    VaDyna { a: Scalar },
    WbDyna { b: Scalar },
    SabDyna { a: Scalar, b: Scalar },
}

/// Miura-type maps between variables and the τ-function relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MiuraId {
    Mu1 { a: Scalar },
    Mu2 { b: Scalar },
    UTau,
    TauVw,
}

/// The eight Lax linear systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaxFamily {
    U,
    TU,
    BlkpU,
    BlkpTu,
    V,
    VAsym,
    W,
    WAsym,
}

/// Any runnable check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckId {
    Equation(EquationId),
    Recurrence(RecurrenceId),
    Miura(MiuraId),
    Lax(LaxFamily),
    /// The telescoping identity on the three potential coefficients.
    PhiSum,
}

fn fmt_scalar(s: Scalar) -> String {
    if s.im == 0.0 {
        format!("{}", s.re)
    } else if s.im < 0.0 {
        format!("{}{}i", s.re, s.im)
    } else {
        format!("{}+{}i", s.re, s.im)
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquationId::Lpkp => write!(f, "LPKP"),
            EquationId::LpkpAlt => write!(f, "LPKP_ALT"),
            EquationId::LpkpRatio => write!(f, "LPKP_RATIO"),
            EquationId::LpmkpVaGen { a } => write!(f, "LPMKP_VA_GEN({})", fmt_scalar(*a)),
            EquationId::LpmkpV => write!(f, "LPMKP_V"),
            EquationId::AsymVP => write!(f, "ASYM_V_P"),
            EquationId::AsymVQ => write!(f, "ASYM_V_Q"),
            EquationId::AsymVR => write!(f, "ASYM_V_R"),
            EquationId::LpmkpWbGen { b } => write!(f, "LPMKP_WB_GEN({})", fmt_scalar(*b)),
            EquationId::LpmkpW => write!(f, "LPMKP_W"),
            EquationId::AsymWP => write!(f, "ASYM_W_P"),
            EquationId::AsymWQ => write!(f, "ASYM_W_Q"),
            EquationId::AsymWR => write!(f, "ASYM_W_R"),
            EquationId::NqcGen { a, b } => {
                write!(f, "NQC_GEN({},{})", fmt_scalar(*a), fmt_scalar(*b))
            }
            EquationId::Nqc { a, b } => write!(f, "NQC({},{})", fmt_scalar(*a), fmt_scalar(*b)),
            EquationId::Lskp => write!(f, "LSKP"),
            EquationId::Blkp => write!(f, "BLKP"),
            EquationId::DefX => write!(f, "DEF_X"),
            EquationId::DefY => write!(f, "DEF_Y"),
            EquationId::DefYp => write!(f, "DEF_YP"),
            EquationId::DefXi => write!(f, "DEF_XI"),
            EquationId::DefEta => write!(f, "DEF_ETA"),
            EquationId::DefZp { a, b } => {
                write!(f, "DEF_ZP({},{})", fmt_scalar(*a), fmt_scalar(*b))
            }
            EquationId::DefSigma => write!(f, "DEF_SIGMA"),
            EquationId::AutLpkp => write!(f, "AUT_LPKP"),
            EquationId::AutLpmkpI => write!(f, "AUT_LPMKP_I"),
            EquationId::AutLpmkpII => write!(f, "AUT_LPMKP_II"),
            EquationId::AutAsymI => write!(f, "AUT_ASYM_I"),
            EquationId::AutAsymII => write!(f, "AUT_ASYM_II"),
            EquationId::AutNqc { a, b } => {
                write!(f, "AUT_NQC({},{})", fmt_scalar(*a), fmt_scalar(*b))
            }
            EquationId::AutBlkp => write!(f, "AUT_BLKP"),
        }
    }
}

impl fmt::Display for RecurrenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecurrenceId::MDyna => write!(f, "M_DYNA"),
            RecurrenceId::UDyna { i, a } => write!(f, "U_DYNA({},{})", i, fmt_scalar(*a)),
            RecurrenceId::TuDyna { j, b } => write!(f, "TU_DYNA({},{})", j, fmt_scalar(*b)),
            RecurrenceId::SDyna { i, j, a, b } => write!(
                f,
                "S_DYNA({},{},{},{})",
                i,
                j,
                fmt_scalar(*a),
                fmt_scalar(*b)
            ),
            RecurrenceId::VaDyna { a } => write!(f, "VA_DYNA({})", fmt_scalar(*a)),
            RecurrenceId::WbDyna { b } => write!(f, "WB_DYNA({})", fmt_scalar(*b)),
            RecurrenceId::SabDyna { a, b } => {
                write!(f, "SAB_DYNA({},{})", fmt_scalar(*a), fmt_scalar(*b))
            }
        }
    }
}

impl fmt::Display for MiuraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MiuraId::Mu1 { a } => write!(f, "MU1({})", fmt_scalar(*a)),
            MiuraId::Mu2 { b } => write!(f, "MU2({})", fmt_scalar(*b)),
            MiuraId::UTau => write!(f, "U_TAU"),
            MiuraId::TauVw => write!(f, "TAU_VW"),
        }
    }
}

impl fmt::Display for LaxFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LaxFamily::U => "LAX_U",
            LaxFamily::TU => "LAX_TU",
            LaxFamily::BlkpU => "LAX_BLKP_U",
            LaxFamily::BlkpTu => "LAX_BLKP_TU",
            LaxFamily::V => "LAX_V",
            LaxFamily::VAsym => "LAX_V_ASYM",
            LaxFamily::W => "LAX_W",
            LaxFamily::WAsym => "LAX_W_ASYM",
        };
        write!(f, "{name}")
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckId::Equation(id) => id.fmt(f),
            CheckId::Recurrence(id) => id.fmt(f),
            CheckId::Miura(id) => id.fmt(f),
            CheckId::Lax(id) => id.fmt(f),
            CheckId::PhiSum => write!(f, "PHI_SUM"),
        }
    }
}

fn parse_real(name: &str, token: &str) -> Result<Scalar, VerifyError> {
    let bad = |detail: String| VerifyError::BadCheckArguments {
        name: name.to_string(),
        detail,
    };
    let token = token.trim();
    if let Some((num, den)) = token.split_once('/') {
        let num: f64 = num
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad numerator {num:?}")))?;
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad denominator {den:?}")))?;
        if den == 0.0 {
            return Err(bad("zero denominator".into()));
        }
        Ok(cr(num / den))
    } else {
        token
            .parse::<f64>()
            .map(cr)
            .map_err(|_| bad(format!("bad number {token:?}")))
    }
}

fn parse_int(name: &str, token: &str) -> Result<i64, VerifyError> {
    token
        .trim()
        .parse::<i64>()
        .map_err(|_| VerifyError::BadCheckArguments {
            name: name.to_string(),
            detail: format!("bad integer {token:?}"),
        })
}

impl CheckId {
    /// Parses a check name like `LPKP`, `NQC(1/3,1/7)`, or `U_DYNA(-1,0)`.
    /// Scalar arguments accept `num/den` rationals or plain floats; names
    /// with arguments may omit them to get the documented defaults.
    pub fn parse(text: &str) -> Result<CheckId, VerifyError> {
        let text = text.trim();
        let (head, args) = match text.split_once('(') {
            Some((head, rest)) => {
                let rest = rest
                    .strip_suffix(')')
                    .ok_or_else(|| VerifyError::UnknownCheck(text.to_string()))?;
                let args: Vec<&str> = if rest.trim().is_empty() {
                    Vec::new()
                } else {
                    rest.split(',').collect()
                };
                (head.trim(), args)
            }
            None => (text, Vec::new()),
        };

        let wrong_count = |wanted: &str| VerifyError::BadCheckArguments {
            name: head.to_string(),
            detail: format!("expected {wanted} arguments, got {}", args.len()),
        };
        let third = cr(1.0 / 3.0);
        let seventh = cr(1.0 / 7.0);
        let zero = cr(0.0);

        // One optional scalar argument with a default.
        let one_scalar = |default: Scalar| -> Result<Scalar, VerifyError> {
            match args.len() {
                0 => Ok(default),
                1 => parse_real(head, args[0]),
                _ => Err(wrong_count("0 or 1")),
            }
        };
        // Two optional scalar arguments with defaults (both or none).
        let two_scalars = |d1: Scalar, d2: Scalar| -> Result<(Scalar, Scalar), VerifyError> {
            match args.len() {
                0 => Ok((d1, d2)),
                2 => Ok((parse_real(head, args[0])?, parse_real(head, args[1])?)),
                _ => Err(wrong_count("0 or 2")),
            }
        };

        use CheckId::*;
        use EquationId as E;
        use LaxFamily as L;
        use MiuraId as Mi;
        use RecurrenceId as R;
        let id = match head {
            "LPKP" => Equation(E::Lpkp),
            "LPKP_ALT" => Equation(E::LpkpAlt),
            "LPKP_RATIO" => Equation(E::LpkpRatio),
            "LPMKP_VA_GEN" => Equation(E::LpmkpVaGen {
                a: one_scalar(third)?,
            }),
            "LPMKP_V" => Equation(E::LpmkpV),
            "ASYM_V_P" => Equation(E::AsymVP),
            "ASYM_V_Q" => Equation(E::AsymVQ),
            "ASYM_V_R" => Equation(E::AsymVR),
            "LPMKP_WB_GEN" => Equation(E::LpmkpWbGen {
                b: one_scalar(seventh)?,
            }),
            "LPMKP_W" => Equation(E::LpmkpW),
            "ASYM_W_P" => Equation(E::AsymWP),
            "ASYM_W_Q" => Equation(E::AsymWQ),
            "ASYM_W_R" => Equation(E::AsymWR),
            "NQC_GEN" => {
                let (a, b) = two_scalars(third, seventh)?;
                Equation(E::NqcGen { a, b })
            }
            "NQC" => {
                let (a, b) = two_scalars(third, seventh)?;
                Equation(E::Nqc { a, b })
            }
            "LSKP" => Equation(E::Lskp),
            "BLKP" => Equation(E::Blkp),
            "DEF_X" => Equation(E::DefX),
            "DEF_Y" => Equation(E::DefY),
            "DEF_YP" => Equation(E::DefYp),
            "DEF_XI" => Equation(E::DefXi),
            "DEF_ETA" => Equation(E::DefEta),
            "DEF_ZP" => {
                let (a, b) = two_scalars(third, seventh)?;
                Equation(E::DefZp { a, b })
            }
            "DEF_SIGMA" => Equation(E::DefSigma),
            "AUT_LPKP" => Equation(E::AutLpkp),
            "AUT_LPMKP_I" => Equation(E::AutLpmkpI),
            "AUT_LPMKP_II" => Equation(E::AutLpmkpII),
            "AUT_ASYM_I" => Equation(E::AutAsymI),
            "AUT_ASYM_II" => Equation(E::AutAsymII),
            "AUT_NQC" => {
                let (a, b) = two_scalars(third, seventh)?;
                Equation(E::AutNqc { a, b })
            }
            "AUT_BLKP" => Equation(E::AutBlkp),
            "M_DYNA" => Recurrence(R::MDyna),
            "U_DYNA" => match args.len() {
                0 => Recurrence(R::UDyna { i: 0, a: zero }),
                2 => Recurrence(R::UDyna {
                    i: parse_int(head, args[0])?,
                    a: parse_real(head, args[1])?,
                }),
                _ => return Err(wrong_count("0 or 2")),
            },
            "TU_DYNA" => match args.len() {
                0 => Recurrence(R::TuDyna { j: 0, b: zero }),
                2 => Recurrence(R::TuDyna {
                    j: parse_int(head, args[0])?,
                    b: parse_real(head, args[1])?,
                }),
                _ => return Err(wrong_count("0 or 2")),
            },
            "S_DYNA" => match args.len() {
                0 => Recurrence(R::SDyna {
                    i: 0,
                    j: 0,
                    a: third,
                    b: seventh,
                }),
                2 => Recurrence(R::SDyna {
                    i: parse_int(head, args[0])?,
                    j: parse_int(head, args[1])?,
                    a: third,
                    b: seventh,
                }),
                4 => Recurrence(R::SDyna {
                    i: parse_int(head, args[0])?,
                    j: parse_int(head, args[1])?,
                    a: parse_real(head, args[2])?,
                    b: parse_real(head, args[3])?,
                }),
                _ => return Err(wrong_count("0, 2, or 4")),
            },
            "VA_DYNA" => Recurrence(R::VaDyna {
                a: one_scalar(third)?,
            }),
            "WB_DYNA" => Recurrence(R::WbDyna {
                b: one_scalar(seventh)?,
            }),
            "SAB_DYNA" => {
                let (a, b) = two_scalars(third, seventh)?;
                Recurrence(R::SabDyna { a, b })
            }
            "MU1" => Miura(Mi::Mu1 {
                a: one_scalar(zero)?,
            }),
            "MU2" => Miura(Mi::Mu2 {
                b: one_scalar(zero)?,
            }),
            "U_TAU" => Miura(Mi::UTau),
            "TAU_VW" => Miura(Mi::TauVw),
            "LAX_U" => Lax(L::U),
            "LAX_TU" => Lax(L::TU),
            "LAX_BLKP_U" => Lax(L::BlkpU),
            "LAX_BLKP_TU" => Lax(L::BlkpTu),
            "LAX_V" => Lax(L::V),
            "LAX_V_ASYM" => Lax(L::VAsym),
            "LAX_W" => Lax(L::W),
            "LAX_W_ASYM" => Lax(L::WAsym),
            "PHI_SUM" => PhiSum,
            _ => return Err(VerifyError::UnknownCheck(text.to_string())),
        };
        if !args.is_empty() {
            // Reject stray arguments on argument-free names.
            let argless = matches!(
                id,
                Equation(
                    E::Lpkp
                        | E::LpkpAlt
                        | E::LpkpRatio
                        | E::LpmkpV
                        | E::AsymVP
                        | E::AsymVQ
                        | E::AsymVR
                        | E::LpmkpW
                        | E::AsymWP
                        | E::AsymWQ
                        | E::AsymWR
                        | E::Lskp
                        | E::Blkp
                        | E::DefX
                        | E::DefY
                        | E::DefYp
                        | E::DefXi
                        | E::DefEta
                        | E::DefSigma
                        | E::AutLpkp
                        | E::AutLpmkpI
                        | E::AutLpmkpII
                        | E::AutAsymI
                        | E::AutAsymII
                        | E::AutBlkp
                ) | Recurrence(R::MDyna)
                    | Miura(Mi::UTau | Mi::TauVw)
                    | Lax(_)
                    | PhiSum
            );
            if argless {
                return Err(wrong_count("no"));
            }
        }
        Ok(id)
    }
}

/// The canonical check list: every relation at its reference arguments.
/// Autonomous specializations only make sense for constant parameter
/// sequences, so they are included on request.
pub fn standard_catalog(include_autonomous: bool) -> Vec<CheckId> {
    let third = cr(1.0 / 3.0);
    let seventh = cr(1.0 / 7.0);
    let zero = cr(0.0);
    use CheckId::*;
    use EquationId as E;
    use LaxFamily as L;
    use MiuraId as Mi;
    use RecurrenceId as R;

    let mut out = vec![
        Equation(E::Lpkp),
        Equation(E::LpkpAlt),
        Equation(E::LpkpRatio),
        Equation(E::LpmkpVaGen { a: third }),
        Equation(E::LpmkpV),
        Equation(E::AsymVP),
        Equation(E::AsymVQ),
        Equation(E::AsymVR),
        Equation(E::LpmkpWbGen { b: seventh }),
        Equation(E::LpmkpW),
        Equation(E::AsymWP),
        Equation(E::AsymWQ),
        Equation(E::AsymWR),
        Equation(E::Nqc {
            a: third,
            b: seventh,
        }),
        Equation(E::Lskp),
        Equation(E::Blkp),
        Recurrence(R::MDyna),
    ];
    for i in [-1, 0, 1] {
        for a in [zero, third] {
            out.push(Recurrence(R::UDyna { i, a }));
        }
    }
    for j in [-1, 0, 1] {
        for b in [zero, seventh] {
            out.push(Recurrence(R::TuDyna { j, b }));
        }
    }
    for i in [-1, 0, 1] {
        for j in [-1, 0, 1] {
            out.push(Recurrence(R::SDyna {
                i,
                j,
                a: third,
                b: seventh,
            }));
        }
    }
    out.extend([
        Recurrence(R::VaDyna { a: third }),
        Recurrence(R::WbDyna { b: seventh }),
        Recurrence(R::SabDyna {
            a: third,
            b: seventh,
        }),
        Miura(Mi::Mu1 { a: zero }),
        Miura(Mi::Mu1 { a: third }),
        Miura(Mi::Mu2 { b: zero }),
        Miura(Mi::Mu2 { b: seventh }),
        Miura(Mi::UTau),
        Miura(Mi::TauVw),
        Lax(L::U),
        Lax(L::TU),
        Lax(L::BlkpU),
        Lax(L::BlkpTu),
        Lax(L::V),
        Lax(L::VAsym),
        Lax(L::W),
        Lax(L::WAsym),
        PhiSum,
        Equation(E::DefX),
        Equation(E::DefY),
        Equation(E::DefYp),
        Equation(E::DefXi),
        Equation(E::DefEta),
        Equation(E::DefZp {
            a: third,
            b: seventh,
        }),
        Equation(E::DefSigma),
    ]);
    if include_autonomous {
        out.extend([
            Equation(E::AutLpkp),
            Equation(E::AutLpmkpI),
            Equation(E::AutLpmkpII),
            Equation(E::AutAsymI),
            Equation(E::AutAsymII),
            Equation(E::AutNqc {
                a: third,
                b: seventh,
            }),
            Equation(E::AutBlkp),
        ]);
    }
    out
}
