//! Exact algebra in the four commuting symbols x, v, x̄, v̄.
//!
//! A [`ReducedPoly`] of bidegree k is a linear combination of the monomials
//! x^{k-a} v^a x̄^{k-b} v̄^b with 0 <= a, b <= k, stored as a (k+1)×(k+1)
//! grid of [`GaussianRational`] coefficients. The grid entry (a, b) records
//! the degrees in v and v̄. This closed family carries the whole great-circle
//! calculus: the derivative δ with δx = v, δv = -x, δx̄ = v̄, δv̄ = -x̄, the
//! isotropy actions of the point symmetry s and its square root j, their
//! eigenprojections, and the L² inner product of the corresponding functions
//! on the unit sphere.

use crate::error::Error;
use crate::scalar::GaussianRational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Isotropy operators at the base point acting on reduced polynomials.
///
/// `SymmetryS` substitutes v -> -v, v̄ -> -v̄; `RootJ` substitutes v -> iv,
/// v̄ -> -iv̄. Applying `RootJ` twice gives `SymmetryS`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IsotropyOp {
    SymmetryS,
    RootJ,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Eigenvalue {
    One,
    MinusOne,
    I,
    MinusI,
}

/// An eigenvalue of an isotropy operator, labelling an eigenprojection.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EigenLabel {
    op: IsotropyOp,
    eigenvalue: Eigenvalue,
}

impl EigenLabel {
    /// The symmetry s is an involution, so ±i are rejected for it.
    pub fn new(op: IsotropyOp, eigenvalue: Eigenvalue) -> Result<Self, Error> {
        if op == IsotropyOp::SymmetryS
            && !matches!(eigenvalue, Eigenvalue::One | Eigenvalue::MinusOne)
        {
            return Err(Error::InvalidEigenvalue);
        }
        Ok(EigenLabel { op, eigenvalue })
    }

    pub fn symmetry_even() -> Self {
        EigenLabel {
            op: IsotropyOp::SymmetryS,
            eigenvalue: Eigenvalue::One,
        }
    }

    pub fn symmetry_odd() -> Self {
        EigenLabel {
            op: IsotropyOp::SymmetryS,
            eigenvalue: Eigenvalue::MinusOne,
        }
    }

    pub fn root_j(eigenvalue: Eigenvalue) -> Self {
        EigenLabel {
            op: IsotropyOp::RootJ,
            eigenvalue,
        }
    }

    pub fn op(&self) -> IsotropyOp {
        self.op
    }

    pub fn eigenvalue(&self) -> Eigenvalue {
        self.eigenvalue
    }

    fn keeps(&self, a: usize, b: usize) -> bool {
        match self.op {
            IsotropyOp::SymmetryS => {
                let even = (a + b) % 2 == 0;
                match self.eigenvalue {
                    Eigenvalue::One => even,
                    Eigenvalue::MinusOne => !even,
                    _ => unreachable!(),
                }
            }
            IsotropyOp::RootJ => {
                let r = (a as i64 - b as i64).rem_euclid(4);
                let want = match self.eigenvalue {
                    Eigenvalue::One => 0,
                    Eigenvalue::MinusOne => 2,
                    Eigenvalue::I => 1,
                    Eigenvalue::MinusI => 3,
                };
                r == want
            }
        }
    }
}

/// Polynomial of bidegree (k, k) in the reduced symbols x, v, x̄, v̄.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReducedPoly {
    k: usize,
    coeffs: Vec<GaussianRational>,
}

impl ReducedPoly {
    pub fn zero(k: usize) -> Self {
        ReducedPoly {
            k,
            coeffs: vec![GaussianRational::zero(); (k + 1) * (k + 1)],
        }
    }

    /// Single monomial x^{k-a} v^a x̄^{k-b} v̄^b with the given coefficient.
    pub fn monomial(k: usize, a: usize, b: usize, coeff: GaussianRational) -> Self {
        assert!(a <= k && b <= k, "monomial indices out of range");
        let mut p = Self::zero(k);
        p.set(a, b, coeff);
        p
    }

    /// Builds a grid from integer entries, a convenience for fixed examples.
    pub fn from_entries(k: usize, entries: &[(usize, usize, i64)]) -> Self {
        let mut p = Self::zero(k);
        for &(a, b, c) in entries {
            p.add_at(a, b, &GaussianRational::integer(c));
        }
        p
    }

    /// The power (x x̄)^k, a single entry 1 at (0, 0).
    pub fn x_xbar_pow(k: usize) -> Self {
        Self::monomial(k, 0, 0, GaussianRational::one())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn idx(&self, a: usize, b: usize) -> usize {
        a * (self.k + 1) + b
    }

    pub fn coeff(&self, a: usize, b: usize) -> &GaussianRational {
        &self.coeffs[self.idx(a, b)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: GaussianRational) {
        let i = self.idx(a, b);
        self.coeffs[i] = c;
    }

    pub fn add_at(&mut self, a: usize, b: usize, c: &GaussianRational) {
        let i = self.idx(a, b);
        self.coeffs[i] = self.coeffs[i].add(c);
    }

    /// Nonzero entries as (a, b, coefficient).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GaussianRational)> {
        let k = self.k;
        self.coeffs.iter().enumerate().filter_map(move |(i, c)| {
            if c.is_zero() {
                None
            } else {
                Some((i / (k + 1), i % (k + 1), c))
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Reality of the underlying function: conjugation swaps barred and
    /// unbarred symbols, so a real polynomial has coeffs[b][a] = conj(coeffs[a][b]).
    pub fn is_real(&self) -> bool {
        for a in 0..=self.k {
            for b in 0..=self.k {
                if *self.coeff(b, a) != self.coeff(a, b).conj() {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, Error> {
        if self.k != rhs.k {
            return Err(Error::DegreeMismatch {
                left: self.k,
                right: rhs.k,
            });
        }
        let mut out = self.clone();
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out.coeffs[i] = out.coeffs[i].add(c);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, Error> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        ReducedPoly {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        ReducedPoly {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    pub fn scale_int(&self, s: i64) -> Self {
        self.scale(&GaussianRational::integer(s))
    }

    pub fn scale_rational(&self, s: &BigRational) -> Self {
        ReducedPoly {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c.scale_rational(s)).collect(),
        }
    }

    /// Grid convolution; the bidegrees add.
    pub fn mul(&self, rhs: &Self) -> Self {
        let k = self.k + rhs.k;
        let mut out = Self::zero(k);
        for (a1, b1, c1) in self.entries() {
            for (a2, b2, c2) in rhs.entries() {
                out.add_at(a1 + a2, b1 + b2, &c1.mul(c2));
            }
        }
        out
    }

    /// Great-circle derivative: the derivation with δx = v, δv = -x,
    /// δx̄ = v̄, δv̄ = -x̄, applied monomial-wise by the Leibniz rule.
    /// Preserves the bidegree.
    pub fn delta(&self) -> Self {
        self.delta_impl(false)
    }

    /// Variant of [`delta`](Self::delta) with the sign of δv flipped to +x.
    /// Exists only so the self-test suite can demonstrate that the invariant
    /// checks detect a wrong derivation rule.
    pub fn delta_fault_injected(&self) -> Self {
        self.delta_impl(true)
    }

    fn delta_impl(&self, flip_dv: bool) -> Self {
        let k = self.k;
        let mut out = Self::zero(k);
        for (a, b, c) in self.entries() {
            // d/dx times δx = v raises a; the monomial has x-degree k-a.
            if a < k {
                out.add_at(a + 1, b, &c.scale_int((k - a) as i64));
            }
            // d/dv times δv = -x lowers a.
            if a > 0 {
                let s = if flip_dv { a as i64 } else { -(a as i64) };
                out.add_at(a - 1, b, &c.scale_int(s));
            }
            // Conjugate rules for x̄ and v̄.
            if b < k {
                out.add_at(a, b + 1, &c.scale_int((k - b) as i64));
            }
            if b > 0 {
                out.add_at(a, b - 1, &c.scale_int(-(b as i64)));
            }
        }
        out
    }

    /// Applies s or j by rescaling each monomial: (-1)^{a+b} for the
    /// symmetry, i^{a-b} for its square root.
    pub fn apply_isotropy(&self, op: IsotropyOp) -> Self {
        let mut out = Self::zero(self.k);
        for (a, b, c) in self.entries() {
            let scaled = match op {
                IsotropyOp::SymmetryS => c.mul_i_pow(2 * (a as i64 + b as i64)),
                IsotropyOp::RootJ => c.mul_i_pow(a as i64 - b as i64),
            };
            out.set(a, b, scaled);
        }
        out
    }

    /// Keeps exactly the monomials with the labelled eigenvalue under
    /// [`apply_isotropy`](Self::apply_isotropy). The two s-projections and
    /// the four j-projections each resolve the identity.
    pub fn project_eigen(&self, label: EigenLabel) -> Self {
        let mut out = Self::zero(self.k);
        for (a, b, c) in self.entries() {
            if label.keeps(a, b) {
                out.set(a, b, c.clone());
            }
        }
        out
    }
}

fn factorial(m: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=m {
        acc *= BigInt::from(i);
    }
    acc
}

/// Exact L² Gram matrix of the reduced monomials of bidegree k, realized as
/// functions on the unit sphere of C^{n+1} (normalized measure) by the
/// substitution x = z_{n+1}, v = z_1.
///
/// The entry between (a, b) and (a', b') vanishes unless a - b = a' - b',
/// and otherwise equals n! (b+a')! (2k-b-a')! / (n+2k)!.
#[derive(Clone, Debug)]
pub struct ReducedGram {
    n: usize,
    k: usize,
    entries: Vec<BigRational>,
}

impl ReducedGram {
    pub fn new(n: usize, k: usize) -> Result<Self, Error> {
        if n < 1 {
            return Err(Error::InvalidDimension);
        }
        let m = (k + 1) * (k + 1);
        let denom = factorial(n + 2 * k);
        let nfac = factorial(n);
        let mut entries = vec![BigRational::zero(); m * m];
        for a in 0..=k {
            for b in 0..=k {
                for a2 in 0..=k {
                    for b2 in 0..=k {
                        if a + b2 != b + a2 {
                            continue;
                        }
                        let num = &nfac * factorial(b + a2) * factorial(2 * k - b - a2);
                        let i = (a * (k + 1) + b) * m + (a2 * (k + 1) + b2);
                        entries[i] = BigRational::new(num, denom.clone());
                    }
                }
            }
        }
        Ok(ReducedGram { n, k, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, a: usize, b: usize, a2: usize, b2: usize) -> &BigRational {
        let m = (self.k + 1) * (self.k + 1);
        &self.entries[(a * (self.k + 1) + b) * m + (a2 * (self.k + 1) + b2)]
    }

    /// Hermitian L² pairing, conjugate-linear in the first argument.
    pub fn inner(&self, p: &ReducedPoly, q: &ReducedPoly) -> Result<GaussianRational, Error> {
        if p.k() != self.k || q.k() != self.k {
            return Err(Error::DegreeMismatch {
                left: p.k(),
                right: q.k(),
            });
        }
        let mut acc = GaussianRational::zero();
        for (a, b, cp) in p.entries() {
            for (a2, b2, cq) in q.entries() {
                let g = self.entry(a, b, a2, b2);
                if g.is_zero() {
                    continue;
                }
                acc = acc.add(&cp.conj().mul(cq).scale_rational(g));
            }
        }
        Ok(acc)
    }

    /// Exact squared L² norm, a nonnegative rational.
    pub fn norm_sq(&self, p: &ReducedPoly) -> Result<BigRational, Error> {
        let v = self.inner(p, p)?;
        debug_assert!(v.im.is_zero());
        Ok(v.re)
    }
}

/// Subtracts from `p` its L²-orthogonal projection onto the tangential span,
/// the complex span of the monomials (1, 0) and (0, 1). Every tangent image
/// along a direction outside span{v, iv} is L²-orthogonal to all reduced
/// monomials by weight mismatch, so the two-monomial span suffices.
pub fn project_normal_reduced(p: &ReducedPoly, n: usize) -> Result<ReducedPoly, Error> {
    let k = p.k();
    if k == 0 {
        return Err(Error::DegenerateDegree);
    }
    let gram = ReducedGram::new(n, k)?;
    let m10 = ReducedPoly::monomial(k, 1, 0, GaussianRational::one());
    let m01 = ReducedPoly::monomial(k, 0, 1, GaussianRational::one());
    let g00 = gram.inner(&m10, &m10)?;
    let g01 = gram.inner(&m10, &m01)?;
    let g10 = gram.inner(&m01, &m10)?;
    let g11 = gram.inner(&m01, &m01)?;
    let b0 = gram.inner(&m10, p)?;
    let b1 = gram.inner(&m01, p)?;
    // 2x2 solve of the normal equations G c = b.
    let det = g00.mul(&g11).sub(&g01.mul(&g10));
    let c10 = b0.mul(&g11).sub(&g01.mul(&b1)).div(&det);
    let c01 = g00.mul(&b1).sub(&g10.mul(&b0)).div(&det);
    p.sub(&m10.scale(&c10))?.sub(&m01.scale(&c01))
}
