//! Differential geometry of the equivariant embeddings Φ_k and their direct
//! sums: fundamental forms in the reduced calculus, the splitting of the
//! second fundamental form into its (1,1) and (2,0)+(0,2) parts, both
//! readings of the covariant derivative of the pluri-mean curvature, and the
//! parallelism verdict.

use crate::error::Error;
use crate::reduced::{
    project_normal_reduced, EigenLabel, Eigenvalue, ReducedGram, ReducedPoly,
};
use crate::scalar::GaussianRational;
use num_rational::BigRational;
use num_traits::Zero;

/// Inner product convention stamped into every report: the L² product of
/// functions on the unit sphere with normalized measure.
pub const INNER_PRODUCT_LABEL: &str = "L2-sphere-normalized";

/// Engine version stamped into reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// The embedding Φ_k as a reduced grid: the single monomial (x x̄)^k.
pub fn phi_reduced(k: usize) -> Result<ReducedPoly, Error> {
    if k == 0 {
        return Err(Error::DegenerateDegree);
    }
    Ok(ReducedPoly::x_xbar_pow(k))
}

/// dΦ v = δ(x x̄)^k = k (x x̄)^{k-1} (v x̄ + x v̄), the tangent image of the
/// direction v. Grid: k at (1, 0) and (0, 1).
pub fn first_fundamental(k: usize) -> Result<ReducedPoly, Error> {
    Ok(phi_reduced(k)?.delta())
}

/// α(v, v) = δ²(x x̄)^k, the second fundamental form on the diagonal. The
/// grid is {(2,0): k(k-1), (0,2): k(k-1), (1,1): 2k², (0,0): -2k}; it is
/// entirely s-even and hence normal without any tangential subtraction.
pub fn second_fundamental(k: usize) -> Result<ReducedPoly, Error> {
    Ok(first_fundamental(k)?.delta())
}

/// α(v, v) split into eigenparts of the isotropy square root j.
#[derive(Clone, Debug)]
pub struct SffSplit {
    pub alpha: ReducedPoly,
    /// The pluri-mean curvature part, the j-fixed projection of α.
    pub alpha11: ReducedPoly,
    /// The complementary (2,0)+(0,2) part, negated by j.
    pub alpha20_plus_02: ReducedPoly,
}

/// Splits α(v, v) by the eigenprojections of j. The (1,1) part is the
/// projection onto the +1 eigenspace, the (2,0)+(0,2) part onto -1, and the
/// two summands recover α.
pub fn split_sff(k: usize) -> Result<SffSplit, Error> {
    let alpha = second_fundamental(k)?;
    let alpha11 = alpha.project_eigen(EigenLabel::root_j(Eigenvalue::One));
    let alpha20_plus_02 = alpha.project_eigen(EigenLabel::root_j(Eigenvalue::MinusOne));
    Ok(SffSplit {
        alpha,
        alpha11,
        alpha20_plus_02,
    })
}

/// ∇_v α^{(1,1)}(v, v) in its classical presentation: differentiate the
/// normal field ξ = α^{(1,1)}(v, v) by the great-circle derivative, keep the
/// s-odd part, and discard the manifestly tangential Leibniz term
/// 2k (x x̄)^{k-1} δ(-x x̄ + v v̄) = -4 dΦ v.
///
/// Grid: {(2,1): 2k²(k-1), (1,2): 2k²(k-1), (1,0): -4k(k-1), (0,1): -4k(k-1)},
/// zero exactly when k = 1.
pub fn nabla_alpha11_paper(k: usize) -> Result<ReducedPoly, Error> {
    if k == 0 {
        return Err(Error::DegenerateDegree);
    }
    if k == 1 {
        // ξ is 2(-x x̄ + v v̄); its derivative is purely tangential.
        return Ok(ReducedPoly::zero(1));
    }
    // ξ = ξ_a + ξ_b with ξ_a = 2k(k-1) (x x̄)^{k-2} x x̄ v v̄ and
    // ξ_b = 2k (x x̄)^{k-1} (-x x̄ + v v̄).
    let xi_a = ReducedPoly::monomial(k, 1, 1, GaussianRational::integer(2 * k as i64))
        .scale_int(k as i64 - 1);
    let b_factor = ReducedPoly::from_entries(1, &[(0, 0, -1), (1, 1, 1)]);
    // Leibniz pieces of δξ: δξ_a, the derivative of the power factor of ξ_b,
    // and the tangential piece 2k (x x̄)^{k-1} δ(-x x̄ + v v̄), which is the
    // multiple -4 dΦ v of the tangent image and is dropped when passing to
    // the normal component.
    let d1 = xi_a.delta();
    let d2 = ReducedPoly::x_xbar_pow(k - 1)
        .delta()
        .mul(&b_factor)
        .scale_int(2 * k as i64);
    let sum = d1.add(&d2)?;
    Ok(sum.project_eigen(EigenLabel::symmetry_odd()))
}

/// ∇_v^⊥ α^{(1,1)}(v, v) with the full normal projection: the s-odd part of
/// δξ minus its exact L²-orthogonal projection onto the tangential span.
/// Differs from [`nabla_alpha11_paper`] by a tangential vector only, and is
/// zero exactly when k = 1; the (2,1)/(1,2) components cannot be cancelled
/// tangentially.
pub fn nabla_alpha11_perp(k: usize, n: usize) -> Result<ReducedPoly, Error> {
    if k == 0 {
        return Err(Error::DegenerateDegree);
    }
    let xi = split_sff(k)?.alpha11;
    let odd = xi.delta().project_eigen(EigenLabel::symmetry_odd());
    project_normal_reduced(&odd, n)
}

/// A direct sum Σ a_k Φ_k: the dimension n and the nonzero real coefficients
/// of the participating embeddings.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSpec {
    n: usize,
    terms: Vec<(usize, BigRational)>,
}

impl EmbeddingSpec {
    pub fn new(n: usize, mut terms: Vec<(usize, BigRational)>) -> Result<Self, Error> {
        if n < 1 {
            return Err(Error::InvalidDimension);
        }
        if terms.is_empty() {
            return Err(Error::InvalidSpec("no terms".into()));
        }
        terms.sort_by_key(|t| t.0);
        for pair in terms.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidSpec(format!("duplicate k = {}", pair[0].0)));
            }
        }
        for (k, a) in &terms {
            if *k == 0 {
                return Err(Error::InvalidSpec("k = 0 is not an embedding".into()));
            }
            if a.is_zero() {
                return Err(Error::InvalidSpec(format!("zero coefficient at k = {k}")));
            }
        }
        Ok(EmbeddingSpec { n, terms })
    }

    /// Single-summand embedding with unit coefficient.
    pub fn single(n: usize, k: usize) -> Result<Self, Error> {
        Self::new(n, vec![(k, BigRational::from_integer(1.into()))])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(usize, BigRational)] {
        &self.terms
    }

    pub fn max_k(&self) -> usize {
        self.terms.last().map(|t| t.0).unwrap_or(0)
    }
}

/// Per-summand record of all grids and the parallelism residual. All grids
/// scale linearly in the coefficient; the zero/nonzero verdict does not
/// depend on it.
#[derive(Clone, Debug)]
pub struct TermRecord {
    pub k: usize,
    pub coefficient: BigRational,
    pub alpha: ReducedPoly,
    pub alpha11: ReducedPoly,
    pub nabla_paper: ReducedPoly,
    pub nabla_perp: ReducedPoly,
    pub residual_zero: bool,
    /// Exact squared L² norm of the normal residual.
    pub residual_norm_sq: BigRational,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Ppmc,
    NotPpmc,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Ppmc => "ppmc",
            Verdict::NotPpmc => "not_ppmc",
        }
    }
}

/// Verdict record for an embedding: one record per summand plus the global
/// parallelism verdict, which holds iff every summand's normal residual is
/// exactly zero.
#[derive(Clone, Debug)]
pub struct PpmcReport {
    pub n: usize,
    pub terms: Vec<TermRecord>,
    pub verdict: Verdict,
    pub inner_product: &'static str,
    pub version: &'static str,
}

/// Computes the grids and residual for one summand a_k Φ_k in dimension n.
pub fn term_record(n: usize, k: usize, coefficient: &BigRational) -> Result<TermRecord, Error> {
    let split = split_sff(k)?;
    let nabla_paper = nabla_alpha11_paper(k)?;
    let nabla_perp = nabla_alpha11_perp(k, n)?;
    let gram = ReducedGram::new(n, k)?;
    let alpha = split.alpha.scale_rational(coefficient);
    let alpha11 = split.alpha11.scale_rational(coefficient);
    let nabla_paper = nabla_paper.scale_rational(coefficient);
    let nabla_perp = nabla_perp.scale_rational(coefficient);
    let residual_zero = nabla_perp.is_zero();
    let residual_norm_sq = gram.norm_sq(&nabla_perp)?;
    Ok(TermRecord {
        k,
        coefficient: coefficient.clone(),
        alpha,
        alpha11,
        nabla_paper,
        nabla_perp,
        residual_zero,
        residual_norm_sq,
    })
}

/// Evaluates every summand of the embedding and combines the verdicts: a
/// direct sum has parallel pluri-mean curvature only if every summand does.
pub fn ppmc_verdict(spec: &EmbeddingSpec) -> Result<PpmcReport, Error> {
    let mut terms = Vec::with_capacity(spec.terms().len());
    for (k, a) in spec.terms() {
        terms.push(term_record(spec.n(), *k, a)?);
    }
    let verdict = if terms.iter().all(|t| t.residual_zero) {
        Verdict::Ppmc
    } else {
        Verdict::NotPpmc
    };
    Ok(PpmcReport {
        n: spec.n(),
        terms,
        verdict,
        inner_product: INNER_PRODUCT_LABEL,
        version: TOOL_VERSION,
    })
}
