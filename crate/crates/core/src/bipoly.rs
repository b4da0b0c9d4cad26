//! Full coordinate model of V_k: bihomogeneous polynomials of bidegree (k, k)
//! on C^{n+1} in multi-index form, the unitary substitution action, exact and
//! floating-point L² inner products, expansion of reduced expressions, and
//! the orbit-span rank test.

use crate::error::Error;
use crate::reduced::ReducedPoly;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::collections::{BTreeMap, HashMap};

const UNITARY_TOL: f64 = 1e-12;

/// Exponent vector of a monomial in the n+1 complex coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// k times the unit vector at `pos`.
    pub fn concentrated(len: usize, pos: usize, k: u32) -> Self {
        let mut v = vec![0; len];
        v[pos] = k;
        MultiIndex(v)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn bump(&self, pos: usize) -> Self {
        let mut v = self.0.clone();
        v[pos] += 1;
        MultiIndex(v)
    }

    fn sum_with(&self, other: &Self) -> Self {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    fn diff_key(&self, other: &Self) -> Vec<i64> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| *a as i64 - *b as i64)
            .collect()
    }

    /// Product of the factorials of the entries.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &e in &self.0 {
            for i in 2..=e {
                acc *= BigInt::from(i);
            }
        }
        acc
    }
}

/// All multi-indices of total degree k over n+1 variables, in sorted order.
pub fn monomial_basis(n: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n + 1);
    fn rec(prefix: &mut Vec<u32>, rem: u32, pos: usize, n: usize, out: &mut Vec<MultiIndex>) {
        if pos == n {
            prefix.push(rem);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=rem {
            prefix.push(e);
            rec(prefix, rem - e, pos + 1, n, out);
            prefix.pop();
        }
    }
    rec(&mut prefix, k as u32, 0, n, &mut out);
    out.sort();
    out
}

/// Real dimension of V_k: the square of binomial(n+k, n).
pub fn vk_real_dim(n: usize, k: usize) -> usize {
    let m = num_integer::binomial((n + k) as u64, n as u64) as usize;
    m * m
}

/// Bihomogeneous polynomial of bidegree (k, k) on C^{n+1}, stored as a
/// sparse map (μ, ν) -> coefficient of z^μ z̄^ν with |μ| = |ν| = k.
#[derive(Clone, PartialEq, Debug)]
pub struct BiPoly<S: Scalar> {
    n: usize,
    k: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), S>,
}

impl<S: Scalar> BiPoly<S> {
    pub fn zero(n: usize, k: usize) -> Self {
        BiPoly {
            n,
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mu: &MultiIndex, nu: &MultiIndex) -> S {
        self.terms
            .get(&(mu.clone(), nu.clone()))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, mu: MultiIndex, nu: MultiIndex, c: S) {
        debug_assert_eq!(mu.len(), self.n + 1);
        debug_assert_eq!(nu.len(), self.n + 1);
        debug_assert_eq!(mu.degree() as usize, self.k);
        debug_assert_eq!(nu.degree() as usize, self.k);
        if c.is_zero() {
            return;
        }
        let key = (mu, nu);
        match self.terms.get_mut(&key) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, Error> {
        self.check_space(rhs)?;
        let mut out = self.clone();
        for ((mu, nu), c) in &rhs.terms {
            out.add_term(mu.clone(), nu.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, Error> {
        self.check_space(rhs)?;
        let mut out = self.clone();
        for ((mu, nu), c) in &rhs.terms {
            out.add_term(mu.clone(), nu.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for ((mu, nu), c) in &self.terms {
            out.add_term(mu.clone(), nu.clone(), c.mul(s));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_space(&self, rhs: &Self) -> Result<(), Error> {
        if self.n != rhs.n || self.k != rhs.k {
            return Err(Error::SpaceMismatch {
                n_left: self.n,
                k_left: self.k,
                n_right: rhs.n,
                k_right: rhs.k,
            });
        }
        Ok(())
    }

    /// Largest violation of coeff(ν, μ) = conj(coeff(μ, ν)); zero exactly
    /// when the polynomial is a real-valued function.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for ((mu, nu), c) in &self.terms {
            let mirror = self.coeff(nu, mu);
            let d = mirror.sub(&c.conj()).to_complex().norm();
            worst = worst.max(d);
        }
        worst
    }

    pub fn is_real(&self, tol: f64) -> bool {
        for ((mu, nu), c) in &self.terms {
            if !self.coeff(nu, mu).sub(&c.conj()).is_negligible(tol) {
                return false;
            }
        }
        true
    }

    /// Evaluates the polynomial at a numeric point.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        for ((mu, nu), c) in &self.terms {
            let mut t = c.to_complex();
            for (j, &e) in mu.exponents().iter().enumerate() {
                t *= z[j].powu(e);
            }
            for (j, &e) in nu.exponents().iter().enumerate() {
                t *= z[j].conj().powu(e);
            }
            acc += t;
        }
        acc
    }
}

fn herm_dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.conj().mul(y));
    }
    acc
}

/// Multinomial expansion of |v* z|^{2k} for a unit vector v. The result is a
/// real element of V_k with coefficient (k!/μ!)(k!/ν!) conj(v)^μ v^ν at
/// (μ, ν), and it evaluates at every z to |v* z|^{2k}.
pub fn expand_phi<S: Scalar>(v: &[S], k: usize) -> Result<BiPoly<S>, Error> {
    if k == 0 {
        return Err(Error::DegenerateDegree);
    }
    if v.len() < 2 {
        return Err(Error::InvalidDimension);
    }
    let n = v.len() - 1;
    let norm_defect = herm_dot(v, v).sub(&S::one());
    if !norm_defect.is_negligible(UNITARY_TOL) {
        return Err(Error::InvalidFrame {
            deviation: norm_defect.to_complex().norm(),
        });
    }
    let basis = monomial_basis(n, k);
    let kfac = {
        let mut acc = BigInt::one();
        for i in 2..=k {
            acc *= BigInt::from(i);
        }
        acc
    };
    // base(μ) = (k!/μ!) conj(v)^μ; the ν side is its conjugate.
    let mut bases = Vec::with_capacity(basis.len());
    for mu in &basis {
        let coef = BigRational::from_integer(kfac.clone())
            / BigRational::from_integer(mu.factorial());
        let mut t = S::from_rational(&coef);
        for (j, &e) in mu.exponents().iter().enumerate() {
            for _ in 0..e {
                t = t.mul(&v[j].conj());
            }
        }
        bases.push(t);
    }
    let mut out = BiPoly::zero(n, k);
    for (i, mu) in basis.iter().enumerate() {
        if bases[i].is_zero() {
            continue;
        }
        for (j, nu) in basis.iter().enumerate() {
            let c = bases[i].mul(&bases[j].conj());
            out.add_term(mu.clone(), nu.clone(), c);
        }
    }
    Ok(out)
}

type ZPoly<S> = BTreeMap<MultiIndex, S>;

fn zpoly_mul_linear<S: Scalar>(p: &ZPoly<S>, form: &[S]) -> ZPoly<S> {
    let mut out: ZPoly<S> = BTreeMap::new();
    for (mi, c) in p {
        for (l, f) in form.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let key = mi.bump(l);
            let add = c.mul(f);
            match out.get_mut(&key) {
                Some(e) => *e = e.add(&add),
                None => {
                    out.insert(key, add);
                }
            }
        }
    }
    out
}

/// Expands a product of powers of linear forms in z into a z-polynomial.
fn linear_power_product<S: Scalar>(nvars: usize, factors: &[(Vec<S>, usize)]) -> ZPoly<S> {
    let mut acc: ZPoly<S> = BTreeMap::new();
    acc.insert(MultiIndex::zeros(nvars), S::one());
    for (form, e) in factors {
        for _ in 0..*e {
            acc = zpoly_mul_linear(&acc, form);
        }
    }
    acc
}

fn max_unitary_defect<S: Scalar>(g: &[Vec<S>]) -> f64 {
    let dim = g.len();
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let mut s = S::zero();
            for row in g {
                s = s.add(&row[i].conj().mul(&row[j]));
            }
            if i == j {
                s = s.sub(&S::one());
            }
            worst = worst.max(s.to_complex().norm());
        }
    }
    worst
}

fn check_unitary<S: Scalar>(g: &[Vec<S>], dim: usize) -> Result<(), Error> {
    if g.len() != dim || g.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidDimension);
    }
    for i in 0..dim {
        for j in 0..dim {
            let mut s = S::zero();
            for row in g {
                s = s.add(&row[i].conj().mul(&row[j]));
            }
            if i == j {
                s = s.sub(&S::one());
            }
            if !s.is_negligible(UNITARY_TOL) {
                return Err(Error::NotUnitary {
                    deviation: max_unitary_defect(g),
                });
            }
        }
    }
    Ok(())
}

/// Substitution action (g·p)(z) = p(g* z) of a unitary matrix g, the
/// representation of U_{n+1} on V_k. Satisfies
/// `group_act(g, expand_phi(v, k)) = expand_phi(g v, k)`.
pub fn group_act<S: Scalar>(g: &[Vec<S>], p: &BiPoly<S>) -> Result<BiPoly<S>, Error> {
    let dim = p.n() + 1;
    check_unitary(g, dim)?;
    // Image of z^μ under z -> g* z; the z̄ side is the conjugate of the same map.
    let mut cache: HashMap<MultiIndex, ZPoly<S>> = HashMap::new();
    let mut image = |mi: &MultiIndex| -> ZPoly<S> {
        if let Some(v) = cache.get(mi) {
            return v.clone();
        }
        let factors: Vec<(Vec<S>, usize)> = mi
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                let form: Vec<S> = (0..dim).map(|l| g[l][j].conj()).collect();
                (form, e as usize)
            })
            .collect();
        let v = linear_power_product(dim, &factors);
        cache.insert(mi.clone(), v.clone());
        v
    };
    let mut out = BiPoly::zero(p.n(), p.k());
    for ((mu, nu), c) in p.terms() {
        let im_mu = image(mu);
        let im_nu = image(nu);
        for (mu2, a) in &im_mu {
            let ca = c.mul(a);
            for (nu2, b) in &im_nu {
                out.add_term(mu2.clone(), nu2.clone(), ca.mul(&b.conj()));
            }
        }
    }
    Ok(out)
}

/// Hermitian L² inner product on V_k for the normalized sphere measure,
/// conjugate-linear in the first argument. The monomial pairing is nonzero
/// iff ν + μ' = μ + ν', with value n! (μ+ν')! / (n+2k)!.
pub fn inner_l2<S: Scalar>(p: &BiPoly<S>, q: &BiPoly<S>) -> Result<S, Error> {
    if p.n() != q.n() || p.k() != q.k() {
        return Err(Error::SpaceMismatch {
            n_left: p.n(),
            k_left: p.k(),
            n_right: q.n(),
            k_right: q.k(),
        });
    }
    let n = p.n();
    let k = p.k();
    let denom = {
        let mut acc = BigInt::one();
        for i in 2..=(n + 2 * k) {
            acc *= BigInt::from(i);
        }
        acc
    };
    let nfac = {
        let mut acc = BigInt::one();
        for i in 2..=n {
            acc *= BigInt::from(i);
        }
        acc
    };
    // Bucket q by the weight μ - ν; only equal weights pair.
    let mut buckets: HashMap<Vec<i64>, Vec<(&(MultiIndex, MultiIndex), &S)>> = HashMap::new();
    for (key, c) in q.terms() {
        buckets.entry(key.0.diff_key(&key.1)).or_default().push((key, c));
    }
    let mut acc = S::zero();
    for ((mu, nu), cp) in p.terms() {
        let Some(list) = buckets.get(&mu.diff_key(nu)) else {
            continue;
        };
        for ((_, nu2), cq) in list {
            let weight = BigRational::new(&nfac * mu.sum_with(nu2).factorial(), denom.clone());
            acc = acc.add(&cp.conj().mul(cq).mul(&S::from_rational(&weight)));
        }
    }
    Ok(acc)
}

/// Point and horizontal direction: orthonormal vectors u (base point x = u*)
/// and w (tangent v = w*) in C^{n+1}.
#[derive(Clone, Debug)]
pub struct Frame<S: Scalar> {
    n: usize,
    u: Vec<S>,
    w: Vec<S>,
}

impl<S: Scalar> Frame<S> {
    pub fn new(u: Vec<S>, w: Vec<S>) -> Result<Self, Error> {
        if u.len() < 2 || u.len() != w.len() {
            return Err(Error::InvalidDimension);
        }
        let du = herm_dot(&u, &u).sub(&S::one());
        let dw = herm_dot(&w, &w).sub(&S::one());
        let cross = herm_dot(&u, &w);
        for d in [&du, &dw, &cross] {
            if !d.is_negligible(UNITARY_TOL) {
                let deviation = du
                    .to_complex()
                    .norm()
                    .max(dw.to_complex().norm())
                    .max(cross.to_complex().norm());
                return Err(Error::InvalidFrame { deviation });
            }
        }
        let n = u.len() - 1;
        Ok(Frame { n, u, w })
    }

    /// The base frame u = e_{n+1}, w = e_1.
    pub fn standard(n: usize) -> Self {
        let mut u = vec![S::zero(); n + 1];
        u[n] = S::one();
        let mut w = vec![S::zero(); n + 1];
        w[0] = S::one();
        Frame { n, u, w }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> &[S] {
        &self.u
    }

    pub fn w(&self) -> &[S] {
        &self.w
    }
}

impl Frame<Complex64> {
    /// Point of the great circle cos t·u + sin t·w.
    pub fn curve_point(&self, t: f64) -> Vec<Complex64> {
        self.u
            .iter()
            .zip(&self.w)
            .map(|(a, b)| a * t.cos() + b * t.sin())
            .collect()
    }

    /// Frame advanced along the great circle: the velocity field of the
    /// circle is the parallel tangent field along the projected geodesic.
    pub fn advanced(&self, t: f64) -> Self {
        let u = self.curve_point(t);
        let w = self
            .u
            .iter()
            .zip(&self.w)
            .map(|(a, b)| -a * t.sin() + b * t.cos())
            .collect();
        Frame { n: self.n, u, w }
    }

    /// Same point with the direction rotated by the complex structure.
    pub fn j_rotated(&self) -> Self {
        let i = Complex64::new(0.0, 1.0);
        Frame {
            n: self.n,
            u: self.u.clone(),
            w: self.w.iter().map(|c| c * i).collect(),
        }
    }
}

/// Instantiates a reduced polynomial at a frame by substituting the linear
/// forms x = u* z and v = w* z (and conjugates for the barred symbols).
/// This is a ring map and intertwines the great-circle derivative with
/// d/dt along cos t·u + sin t·w.
pub fn embed_reduced<S: Scalar>(p: &ReducedPoly, frame: &Frame<S>) -> BiPoly<S> {
    let k = p.k();
    let n = frame.n();
    let dim = n + 1;
    let u_form: Vec<S> = frame.u().iter().map(|c| c.conj()).collect();
    let w_form: Vec<S> = frame.w().iter().map(|c| c.conj()).collect();
    // Cache of (u* z)^p (w* z)^q expansions; the barred side reuses the
    // conjugates of the same maps.
    let mut cache: HashMap<(usize, usize), ZPoly<S>> = HashMap::new();
    let mut out = BiPoly::zero(n, k);
    for (a, b, c) in p.entries() {
        for key in [(k - a, a), (k - b, b)] {
            cache.entry(key).or_insert_with(|| {
                linear_power_product(
                    dim,
                    &[(u_form.clone(), key.0), (w_form.clone(), key.1)],
                )
            });
        }
        let zmap = cache[&(k - a, a)].clone();
        let zbar = cache[&(k - b, b)].clone();
        let cs = S::from_gaussian(c);
        for (mu, ca) in &zmap {
            let t = cs.mul(ca);
            for (nu, cb) in &zbar {
                out.add_term(mu.clone(), nu.clone(), t.mul(&cb.conj()));
            }
        }
    }
    out
}

/// Deterministic enumeration of the (μ, ν) coefficient basis of V_k,
/// used to flatten polynomials into vectors.
#[derive(Clone, Debug)]
pub struct PairBasis {
    n: usize,
    k: usize,
    pairs: Vec<(MultiIndex, MultiIndex)>,
    index: HashMap<(MultiIndex, MultiIndex), usize>,
}

impl PairBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let mons = monomial_basis(n, k);
        let mut pairs = Vec::with_capacity(mons.len() * mons.len());
        for mu in &mons {
            for nu in &mons {
                pairs.push((mu.clone(), nu.clone()));
            }
        }
        let index = pairs
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        PairBasis { n, k, pairs, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(MultiIndex, MultiIndex)] {
        &self.pairs
    }

    pub fn vectorize<S: Scalar>(&self, p: &BiPoly<S>) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.pairs.len()];
        for (key, c) in p.terms() {
            v[self.index[key]] = c.to_complex();
        }
        v
    }

    /// Sparse numeric Gram of the coefficient basis under the L² pairing.
    pub fn sparse_gram(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n;
        let k = self.k;
        let denom = {
            let mut acc = BigInt::one();
            for i in 2..=(n + 2 * k) {
                acc *= BigInt::from(i);
            }
            acc
        };
        let nfac = {
            let mut acc = BigInt::one();
            for i in 2..=n {
                acc *= BigInt::from(i);
            }
            acc
        };
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, (mu, nu)) in self.pairs.iter().enumerate() {
            buckets.entry(mu.diff_key(nu)).or_default().push(i);
        }
        let mut out = Vec::new();
        for group in buckets.values() {
            for &i in group {
                for &j in group {
                    let (mu, _) = &self.pairs[i];
                    let (_, nu2) = &self.pairs[j];
                    let val = BigRational::new(&nfac * mu.sum_with(nu2).factorial(), denom.clone());
                    out.push((i, j, num_traits::ToPrimitive::to_f64(&val).unwrap()));
                }
            }
        }
        out
    }
}

/// Seeded generator for an independent task; results do not depend on the
/// order tasks are drawn in.
pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(task.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Haar-distributed unitary matrix, by QR of a complex Gaussian matrix with
/// the R-diagonal phases absorbed into Q.
pub fn haar_unitary(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<Complex64>> {
    let gauss = nalgebra::DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) / 2f64.sqrt()
    });
    let qr = gauss.qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            out[i][j] = q[(i, j)] * phase;
        }
    }
    out
}

/// Uniform random point of the unit sphere in C^dim.
pub fn random_unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Result of the orbit-span rank test.
#[derive(Clone, Debug)]
pub struct RankReport {
    pub rank: usize,
    /// Expected real dimension binomial(n+k, n)^2.
    pub expected: usize,
    pub singular_values: Vec<f64>,
    /// Ratio of the singular values across the rank boundary
    /// (infinite when everything past the boundary is zero).
    pub gap: f64,
    pub seed: u64,
    pub sample_count: usize,
}

/// Draws Haar-random unitaries, forms the orbit polynomials g·f_k of the
/// fundamental function, and returns the real rank of their coefficient
/// vectors. The span of the orbit is all of V_k, so with enough samples the
/// rank is the full real dimension binomial(n+k, n)^2.
pub fn orbit_rank(
    n: usize,
    k: usize,
    sample_count: usize,
    seed: u64,
) -> Result<RankReport, Error> {
    if n < 1 {
        return Err(Error::InvalidDimension);
    }
    if k == 0 {
        return Err(Error::DegenerateDegree);
    }
    let dim = n + 1;
    let basis = PairBasis::new(n, k);
    let mut base_point = vec![Complex64::new(0.0, 0.0); dim];
    base_point[dim - 1] = Complex64::new(1.0, 0.0);
    let f_k = expand_phi(&base_point, k)?;
    let cols = 2 * basis.len();
    let mut rows = Vec::with_capacity(sample_count * cols);
    for s in 0..sample_count {
        let mut rng = task_rng(seed, s as u64);
        let g = haar_unitary(&mut rng, dim);
        let p = group_act(&g, &f_k)?;
        for c in basis.vectorize(&p) {
            rows.push(c.re);
            rows.push(c.im);
        }
    }
    let mat = nalgebra::DMatrix::<f64>::from_row_slice(sample_count, cols, &rows);
    let mut sv: Vec<f64> = mat.svd(false, false).singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > 1e-8 * top).count();
    let gap = if rank == 0 {
        0.0
    } else if rank >= sv.len() || sv[rank] == 0.0 {
        f64::INFINITY
    } else {
        sv[rank - 1] / sv[rank]
    };
    Ok(RankReport {
        rank,
        expected: vk_real_dim(n, k),
        singular_values: sv,
        gap,
        seed,
        sample_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    fn unit(dim: usize, pos: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[pos] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn expand_phi_at_basis_vector_is_fundamental() {
        for k in 1..=3usize {
            for n in 1..=2usize {
                let f = expand_phi(&unit(n + 1, n), k).unwrap();
                assert_eq!(f.num_terms(), 1);
                let mu = MultiIndex::concentrated(n + 1, n, k as u32);
                let c = f.coeff(&mu, &mu);
                assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn expand_phi_rejects_degree_zero_and_non_unit() {
        assert!(matches!(
            expand_phi(&unit(2, 0), 0),
            Err(Error::DegenerateDegree)
        ));
        let v = vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(expand_phi(&v, 1), Err(Error::InvalidFrame { .. })));
    }

    #[test]
    fn expand_phi_diagonal_direction_n1_k1() {
        let s = 1.0 / 2f64.sqrt();
        let v = vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)];
        let f = expand_phi(&v, 1).unwrap();
        assert_eq!(f.num_terms(), 4);
        for (_, c) in f.terms() {
            assert!((c - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn expand_phi_evaluation_identity() {
        let mut rng = task_rng(11, 0);
        for k in 1..=3usize {
            let v = random_unit_vector(&mut rng, 3);
            let f = expand_phi(&v, k).unwrap();
            for t in 0..20 {
                let z = random_unit_vector(&mut task_rng(11, 100 + t), 3);
                let direct: Complex64 = {
                    let ip: Complex64 = v.iter().zip(&z).map(|(a, b)| a.conj() * b).sum();
                    Complex64::new(ip.norm_sqr().powi(k as i32), 0.0)
                };
                let d = (f.eval(&z) - direct).norm();
                assert!(d < 1e-12, "k={k} dev={d}");
            }
        }
    }

    #[test]
    fn group_act_identity_and_column_action() {
        let n = 2;
        let k = 2;
        let id: Vec<Vec<Complex64>> = (0..n + 1)
            .map(|i| {
                (0..n + 1)
                    .map(|j| {
                        if i == j {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                    .collect()
            })
            .collect();
        let f = expand_phi(&unit(n + 1, n), k).unwrap();
        assert_eq!(group_act(&id, &f).unwrap(), f);

        let mut rng = task_rng(3, 1);
        let g = haar_unitary(&mut rng, n + 1);
        let acted = group_act(&g, &f).unwrap();
        let v: Vec<Complex64> = (0..n + 1).map(|i| g[i][n]).collect();
        let direct = expand_phi(&v, k).unwrap();
        let diff = acted.sub(&direct).unwrap();
        let dev = diff
            .terms()
            .map(|(_, c)| c.norm())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-12, "equivariance deviation {dev}");
    }

    #[test]
    fn group_act_rejects_non_unitary() {
        let g = vec![
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        let f = expand_phi(&unit(2, 1), 1).unwrap();
        assert!(matches!(
            group_act(&g, &f),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn fundamental_function_is_isotropy_invariant() {
        // Diagonal unit scalars fix f_k.
        let n = 2;
        let f = expand_phi(&unit(n + 1, n), 2).unwrap();
        let g: Vec<Vec<Complex64>> = (0..n + 1)
            .map(|i| {
                (0..n + 1)
                    .map(|j| {
                        if i != j {
                            Complex64::new(0.0, 0.0)
                        } else if i == 0 {
                            Complex64::from_polar(1.0, 0.8)
                        } else if i == 1 {
                            Complex64::new(0.0, 1.0)
                        } else {
                            Complex64::from_polar(1.0, -1.3)
                        }
                    })
                    .collect()
            })
            .collect();
        let acted = group_act(&g, &f).unwrap();
        let dev = acted
            .sub(&f)
            .unwrap()
            .terms()
            .map(|(_, c)| c.norm())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-12);
    }

    #[test]
    fn inner_l2_frozen_values() {
        // <f_1, f_1> over S^3 is 1! (2,0)! / 3! = 1/3.
        let f = expand_phi(&unit(2, 1), 1).unwrap();
        let v = inner_l2(&f, &f).unwrap();
        assert!((v - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        // Exact mode gives the same rational exactly.
        let ue: Vec<GaussianRational> = vec![GaussianRational::zero(), GaussianRational::one()];
        let fe = expand_phi(&ue, 1).unwrap();
        let ve = inner_l2(&fe, &fe).unwrap();
        assert_eq!(ve, GaussianRational::ratio(1, 3));
    }

    #[test]
    fn inner_l2_weight_mismatch_vanishes() {
        let n = 1;
        let k = 2;
        let f = expand_phi(&unit(n + 1, n), k).unwrap();
        let mut q = BiPoly::<Complex64>::zero(n, k);
        q.add_term(
            MultiIndex::new(vec![1, 1]),
            MultiIndex::new(vec![0, 2]),
            Complex64::new(1.0, 0.0),
        );
        let v = inner_l2(&f, &q).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn inner_l2_rejects_mismatched_spaces() {
        let f = expand_phi(&unit(2, 1), 1).unwrap();
        let g = expand_phi(&unit(2, 1), 2).unwrap();
        assert!(matches!(
            inner_l2(&f, &g),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn embed_reduced_on_position_grid() {
        let frame = Frame::<Complex64>::standard(2);
        for k in 1..=3usize {
            let phi = ReducedPoly::x_xbar_pow(k);
            let embedded = embed_reduced(&phi, &frame);
            let expected = expand_phi(&unit(3, 2), k).unwrap();
            assert_eq!(embedded, expected);
        }
    }

    #[test]
    fn embed_reduced_is_a_ring_map() {
        let mut rng = task_rng(5, 9);
        let u = random_unit_vector(&mut rng, 3);
        // Orthonormalize a second vector against u.
        let mut w = random_unit_vector(&mut rng, 3);
        let ip: Complex64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
        for (wi, ui) in w.iter_mut().zip(&u) {
            *wi -= ip * ui;
        }
        let norm: f64 = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for wi in w.iter_mut() {
            *wi /= norm;
        }
        let frame = Frame::new(u, w).unwrap();
        let p = ReducedPoly::from_entries(1, &[(1, 0, 2), (0, 1, 2), (0, 0, -1)]);
        let q = ReducedPoly::from_entries(1, &[(1, 1, 3), (0, 0, 1)]);
        let lhs = embed_reduced(&p.mul(&q), &frame);
        // Compare by evaluation, since the product lives in a larger space.
        let ep = embed_reduced(&p, &frame);
        let eq = embed_reduced(&q, &frame);
        for t in 0..10 {
            let z = random_unit_vector(&mut task_rng(5, 50 + t), 3);
            let d = (lhs.eval(&z) - ep.eval(&z) * eq.eval(&z)).norm();
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn frame_rejects_non_orthonormal() {
        let u = unit(3, 2);
        let w = unit(3, 2);
        assert!(matches!(
            Frame::new(u, w),
            Err(Error::InvalidFrame { .. })
        ));
    }

    #[test]
    fn orbit_rank_small_cases() {
        let r = orbit_rank(1, 1, 20, 42).unwrap();
        assert_eq!(r.rank, 4);
        assert_eq!(r.expected, 4);
        let r = orbit_rank(1, 2, 30, 42).unwrap();
        assert_eq!(r.rank, 9);
        let r = orbit_rank(2, 1, 30, 42).unwrap();
        assert_eq!(r.rank, 9);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = task_rng(0, 0);
        for dim in 2..=4 {
            let g = haar_unitary(&mut rng, dim);
            assert!(max_unitary_defect(&g) < 1e-12);
        }
    }
}
