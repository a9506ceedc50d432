//! Term-wise residuals of two-variable identities.
//!
//! The recurrence and evolution-equation checks in this crate all reduce to
//! "expand both sides over (x-power, t-exponent) monomials and subtract".
//! `TermResidual` collects the surviving coefficients together with the
//! reference scale they should be compared against.

/// One surviving monomial coefficient of a residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualTerm {
    pub x_exponent: f64,
    pub t_exponent: f64,
    pub coeff: f64,
}

/// A residual expanded over (x, t) monomials, plus the magnitude of the
/// largest coefficient of the expression being tested.
#[derive(Clone, Debug)]
pub struct TermResidual {
    pub terms: Vec<ResidualTerm>,
    pub reference_scale: f64,
}

const EXP_TOL: f64 = 1e-9;

impl TermResidual {
    /// Merge raw contributions by (x, t) exponent pair and keep the sums.
    pub(crate) fn assemble(
        mut raw: Vec<(f64, f64, f64)>,
        reference_scale: f64,
    ) -> TermResidual {
        raw.sort_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.total_cmp(&b.1))
        });
        let mut terms: Vec<ResidualTerm> = Vec::new();
        for (xe, te, c) in raw {
            match terms.last_mut() {
                Some(last)
                    if (last.x_exponent - xe).abs()
                        <= EXP_TOL * last.x_exponent.abs().max(xe.abs()).max(1.0)
                        && (last.t_exponent - te).abs()
                            <= EXP_TOL * last.t_exponent.abs().max(te.abs()).max(1.0) =>
                {
                    last.coeff += c;
                }
                _ => terms.push(ResidualTerm {
                    x_exponent: xe,
                    t_exponent: te,
                    coeff: c,
                }),
            }
        }
        terms.retain(|t| t.coeff != 0.0);
        TermResidual {
            terms,
            reference_scale,
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.coeff.abs()))
    }

    /// Largest residual coefficient relative to the reference scale.
    pub fn max_relative(&self) -> f64 {
        self.max_abs_coeff() / self.reference_scale.max(1e-300)
    }
}
