//! Independent floating-point verification in the full coefficient model.
//!
//! Everything here differentiates curves of expanded embeddings only; it
//! never consults the reduced engine's formulas, so agreement between the
//! two is genuine cross-validation. Derivatives are central finite
//! differences along great circles, normal projections solve the Gram system
//! of a finite-difference tangent basis, and the pluri-mean curvature is
//! polarized from diagonal second derivatives.

use crate::bipoly::{
    embed_reduced, expand_phi, group_act, haar_unitary, random_unit_vector, task_rng, Frame,
    PairBasis,
};
use crate::error::Error;
use crate::geometry::EmbeddingSpec;
use crate::reduced::ReducedPoly;
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// Steps and tolerances for the finite-difference checks.
///
/// The per-order tolerances grow with the derivative order, reflecting the
/// truncation error of second-order central stencils at the given steps.
/// Inner second-derivative evaluations inside the third-derivative pipeline
/// use a five-point fourth-order stencil so their truncation error does not
/// pollute the outer difference quotient.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub tol_rel1: f64,
    pub tol_rel2: f64,
    pub tol_rel3: f64,
    pub seed: u64,
    pub sample_count: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            h1: 1e-4,
            h2: 1e-3,
            h3: 1e-2,
            tol_rel1: 1e-7,
            tol_rel2: 1e-5,
            tol_rel3: 1e-3,
            seed: 7,
            sample_count: 50,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), Error> {
        for h in [self.h1, self.h2, self.h3] {
            if !(h >= 1e-12) {
                return Err(Error::StepUnderflow(h));
            }
        }
        let monotone = self.tol_rel1 > 0.0
            && self.tol_rel2 >= self.tol_rel1
            && self.tol_rel3 >= self.tol_rel2;
        if !monotone {
            return Err(Error::InvalidConfig(
                "tolerances must be positive and increase with the derivative order".into(),
            ));
        }
        Ok(())
    }

    /// Copy with every step halved, for convergence-order checks.
    pub fn halved(&self) -> Self {
        OracleConfig {
            h1: self.h1 / 2.0,
            h2: self.h2 / 2.0,
            h3: self.h3 / 2.0,
            ..self.clone()
        }
    }
}

/// Coefficient vector in the direct sum of the V_k blocks of an embedding.
pub type BlockVec = Vec<Vec<Complex64>>;

pub fn block_sub(a: &BlockVec, b: &BlockVec) -> BlockVec {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect())
        .collect()
}

pub fn block_add_scaled(a: &BlockVec, b: &BlockVec, s: f64) -> BlockVec {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q * s).collect())
        .collect()
}

pub fn block_scale(a: &BlockVec, s: f64) -> BlockVec {
    a.iter()
        .map(|x| x.iter().map(|p| p * s).collect())
        .collect()
}

struct AmbientBlock {
    k: usize,
    weight: f64,
    basis: PairBasis,
    gram: Vec<(usize, usize, f64)>,
}

/// The ambient direct sum Σ a_k V_k of an embedding, with per-block bases
/// and numeric Gram data for the L² inner product.
pub struct NumericAmbient {
    n: usize,
    blocks: Vec<AmbientBlock>,
}

impl NumericAmbient {
    pub fn new(spec: &EmbeddingSpec) -> Self {
        let n = spec.n();
        let blocks = spec
            .terms()
            .iter()
            .map(|(k, a)| {
                let basis = PairBasis::new(n, *k);
                let gram = basis.sparse_gram();
                AmbientBlock {
                    k: *k,
                    weight: a.to_f64().unwrap(),
                    basis,
                    gram,
                }
            })
            .collect();
        NumericAmbient { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ks(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.k).collect()
    }

    /// The embedded point Σ a_k Φ_k(z) as a coefficient vector.
    pub fn phi(&self, point: &[Complex64]) -> Result<BlockVec, Error> {
        self.blocks
            .iter()
            .map(|b| {
                let p = expand_phi(point, b.k)?;
                let mut v = b.basis.vectorize(&p);
                for c in v.iter_mut() {
                    *c *= b.weight;
                }
                Ok(v)
            })
            .collect()
    }

    /// Embeds one reduced grid per block at the frame, applying the weights.
    pub fn embed(
        &self,
        frame: &Frame<Complex64>,
        grid_for_k: impl Fn(usize) -> Result<ReducedPoly, Error>,
    ) -> Result<BlockVec, Error> {
        self.blocks
            .iter()
            .map(|b| {
                let grid = grid_for_k(b.k)?;
                let p = embed_reduced(&grid, frame);
                let mut v = b.basis.vectorize(&p);
                for c in v.iter_mut() {
                    *c *= b.weight;
                }
                Ok(v)
            })
            .collect()
    }

    /// Extracts the V_k block of a direct-sum vector as a standalone vector
    /// for a single-summand ambient of the same k.
    pub fn block(&self, v: &BlockVec, k: usize) -> Option<Vec<Complex64>> {
        self.blocks
            .iter()
            .position(|b| b.k == k)
            .map(|i| v[i].clone())
    }

    /// Real L² inner product of the ambient direct sum.
    pub fn inner(&self, x: &BlockVec, y: &BlockVec) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, (xb, yb)) in self.blocks.iter().zip(x.iter().zip(y)) {
            for &(i, j, g) in &b.gram {
                acc += xb[i].conj() * yb[j] * g;
            }
        }
        acc.re
    }

    pub fn norm(&self, x: &BlockVec) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// Relative L² deviation of `got` from `want`.
    pub fn relative_error(&self, got: &BlockVec, want: &BlockVec) -> f64 {
        let scale = self.norm(want);
        let dev = self.norm(&block_sub(got, want));
        if scale == 0.0 {
            dev
        } else {
            dev / scale
        }
    }
}

fn check_frame_dim(spec: &EmbeddingSpec, frame: &Frame<Complex64>) -> Result<(), Error> {
    if frame.n() != spec.n() {
        return Err(Error::InvalidDimension);
    }
    Ok(())
}

fn phi_at(amb: &NumericAmbient, frame: &Frame<Complex64>, t: f64) -> Result<BlockVec, Error> {
    amb.phi(&frame.curve_point(t))
}

/// Central finite differences of t ↦ Φ(cos t·u + sin t·w) at t = 0.
/// Order 1 matches the embedded tangent image, order 2 the second
/// fundamental form, order 3 its derivative, within the configured
/// relative tolerances.
pub fn fd_curve_derivative(
    spec: &EmbeddingSpec,
    frame: &Frame<Complex64>,
    order: u8,
    cfg: &OracleConfig,
) -> Result<BlockVec, Error> {
    cfg.validate()?;
    check_frame_dim(spec, frame)?;
    let amb = NumericAmbient::new(spec);
    fd_curve_derivative_with(&amb, frame, order, cfg)
}

fn fd_curve_derivative_with(
    amb: &NumericAmbient,
    frame: &Frame<Complex64>,
    order: u8,
    cfg: &OracleConfig,
) -> Result<BlockVec, Error> {
    match order {
        1 => {
            let h = cfg.h1;
            let fp = phi_at(amb, frame, h)?;
            let fm = phi_at(amb, frame, -h)?;
            Ok(block_scale(&block_sub(&fp, &fm), 1.0 / (2.0 * h)))
        }
        2 => {
            let h = cfg.h2;
            let fp = phi_at(amb, frame, h)?;
            let f0 = phi_at(amb, frame, 0.0)?;
            let fm = phi_at(amb, frame, -h)?;
            let num = block_add_scaled(&block_add_scaled(&fp, &f0, -2.0), &fm, 1.0);
            Ok(block_scale(&num, 1.0 / (h * h)))
        }
        3 => {
            let h = cfg.h3;
            let f2p = phi_at(amb, frame, 2.0 * h)?;
            let fp = phi_at(amb, frame, h)?;
            let fm = phi_at(amb, frame, -h)?;
            let f2m = phi_at(amb, frame, -2.0 * h)?;
            let num = block_add_scaled(
                &block_add_scaled(&block_add_scaled(&f2p, &fp, -2.0), &fm, 2.0),
                &f2m,
                -1.0,
            );
            Ok(block_scale(&num, 1.0 / (2.0 * h * h * h)))
        }
        o => Err(Error::UnsupportedOrder(o)),
    }
}

fn herm(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Orthonormal complex basis of the horizontal space u^⊥ in C^{n+1}.
fn horizontal_basis(u: &[Complex64]) -> Vec<Vec<Complex64>> {
    let dim = u.len();
    let mut dirs: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..dim {
        if dirs.len() == dim - 1 {
            break;
        }
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[j] = Complex64::new(1.0, 0.0);
        let ip = herm(u, &e);
        for (ei, ui) in e.iter_mut().zip(u) {
            *ei -= ip * ui;
        }
        for d in &dirs {
            let ip = herm(d, &e);
            for (ei, di) in e.iter_mut().zip(d) {
                *ei -= ip * di;
            }
        }
        let norm: f64 = e.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for ei in e.iter_mut() {
                *ei /= norm;
            }
            dirs.push(e);
        }
    }
    dirs
}

struct TangentFrame {
    vectors: Vec<BlockVec>,
    gram_lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    condition: f64,
}

/// Tangent basis of the embedded manifold at the frame's point, assembled by
/// first-order differences along the 2n real horizontal directions, with the
/// factored Gram matrix of the basis.
fn tangent_frame(
    amb: &NumericAmbient,
    frame: &Frame<Complex64>,
    cfg: &OracleConfig,
) -> Result<TangentFrame, Error> {
    let i = Complex64::new(0.0, 1.0);
    let mut vectors = Vec::new();
    for d in horizontal_basis(frame.u()) {
        for dir in [d.clone(), d.iter().map(|c| c * i).collect::<Vec<_>>()] {
            let f = Frame::new(frame.u().to_vec(), dir)?;
            vectors.push(fd_curve_derivative_with(amb, &f, 1, cfg)?);
        }
    }
    let m = vectors.len();
    let gram = nalgebra::DMatrix::<f64>::from_fn(m, m, |a, b| {
        amb.inner(&vectors[a], &vectors[b])
    });
    let svd = gram.clone().svd(false, false);
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    Ok(TangentFrame {
        vectors,
        gram_lu: gram.lu(),
        condition,
    })
}

fn project_with(tf: &TangentFrame, amb: &NumericAmbient, v: &BlockVec) -> BlockVec {
    let m = tf.vectors.len();
    let rhs = nalgebra::DVector::<f64>::from_fn(m, |a, _| amb.inner(&tf.vectors[a], v));
    let coeffs = tf
        .gram_lu
        .solve(&rhs)
        .expect("tangent Gram matrix is singular");
    let mut out = v.clone();
    for (c, t) in coeffs.iter().zip(&tf.vectors) {
        out = block_add_scaled(&out, t, -c);
    }
    out
}

/// Projects a vector onto the normal space at the frame's point and reports
/// the condition number of the tangent Gram matrix.
pub fn normal_project(
    spec: &EmbeddingSpec,
    frame: &Frame<Complex64>,
    v: &BlockVec,
    cfg: &OracleConfig,
) -> Result<(BlockVec, f64), Error> {
    check_frame_dim(spec, frame)?;
    let amb = NumericAmbient::new(spec);
    let tf = tangent_frame(&amb, frame, cfg)?;
    Ok((project_with(&tf, &amb, v), tf.condition))
}

/// Second derivative along the frame direction by the five-point
/// fourth-order stencil, then normal projection: α(w, w) for unit w.
fn alpha_diag_unit(
    amb: &NumericAmbient,
    frame: &Frame<Complex64>,
    cfg: &OracleConfig,
) -> Result<BlockVec, Error> {
    let h = cfg.h2;
    let f2p = phi_at(amb, frame, 2.0 * h)?;
    let fp = phi_at(amb, frame, h)?;
    let f0 = phi_at(amb, frame, 0.0)?;
    let fm = phi_at(amb, frame, -h)?;
    let f2m = phi_at(amb, frame, -2.0 * h)?;
    let mut num = block_scale(&f2p, -1.0);
    num = block_add_scaled(&num, &fp, 16.0);
    num = block_add_scaled(&num, &f0, -30.0);
    num = block_add_scaled(&num, &fm, 16.0);
    num = block_add_scaled(&num, &f2m, -1.0);
    let d2 = block_scale(&num, 1.0 / (12.0 * h * h));
    let tf = tangent_frame(amb, frame, cfg)?;
    Ok(project_with(&tf, amb, &d2))
}

/// Second fundamental form α(v, d) for the frame direction v and any
/// horizontal direction d, by polarization of diagonal values.
pub fn fd_alpha_polarized(
    spec: &EmbeddingSpec,
    frame: &Frame<Complex64>,
    second_direction: &[Complex64],
    cfg: &OracleConfig,
) -> Result<BlockVec, Error> {
    cfg.validate()?;
    check_frame_dim(spec, frame)?;
    if second_direction.len() != frame.u().len() {
        return Err(Error::InvalidDimension);
    }
    let cross = herm(frame.u(), second_direction).norm();
    if cross > 1e-10 {
        return Err(Error::NotHorizontal(cross));
    }
    let amb = NumericAmbient::new(spec);
    // α on a non-unit diagonal scales with the squared length.
    let alpha_diag = |d: &[Complex64]| -> Result<Option<BlockVec>, Error> {
        let norm: f64 = d.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-13 {
            return Ok(None);
        }
        let unit: Vec<Complex64> = d.iter().map(|c| c / norm).collect();
        let f = Frame::new(frame.u().to_vec(), unit)?;
        Ok(Some(block_scale(
            &alpha_diag_unit(&amb, &f, cfg)?,
            norm * norm,
        )))
    };
    let plus: Vec<Complex64> = frame
        .w()
        .iter()
        .zip(second_direction)
        .map(|(a, b)| a + b)
        .collect();
    let minus: Vec<Complex64> = frame
        .w()
        .iter()
        .zip(second_direction)
        .map(|(a, b)| a - b)
        .collect();
    let ap = alpha_diag(&plus)?;
    let am = alpha_diag(&minus)?;
    let zero = amb.phi(frame.u())?.iter().map(|b| vec![Complex64::new(0.0, 0.0); b.len()]).collect();
    let ap = ap.unwrap_or_else(|| block_scale(&zero, 0.0));
    let am = am.unwrap_or_else(|| block_scale(&zero, 0.0));
    Ok(block_scale(&block_sub(&ap, &am), 0.25))
}

/// Result of the derivative-of-pluri-mean-curvature check.
pub struct NablaDiagResult {
    pub vector: BlockVec,
    /// Condition number of the tangent Gram matrix at the base point.
    pub tangent_condition: f64,
}

/// ∇_v^⊥ α^{(1,1)}(v, v) by pure differences: the pluri-mean curvature
/// ½(α(v_t, v_t) + α(Jv_t, Jv_t)) is evaluated along the geodesic with the
/// parallel field v_t = x'(t), differenced in t, and projected normally at
/// the base point.
pub fn fd_nabla_alpha11_diagonal(
    spec: &EmbeddingSpec,
    frame: &Frame<Complex64>,
    cfg: &OracleConfig,
) -> Result<NablaDiagResult, Error> {
    cfg.validate()?;
    check_frame_dim(spec, frame)?;
    let amb = NumericAmbient::new(spec);
    let a11 = |t: f64| -> Result<BlockVec, Error> {
        let fr = frame.advanced(t);
        let a = alpha_diag_unit(&amb, &fr, cfg)?;
        let b = alpha_diag_unit(&amb, &fr.j_rotated(), cfg)?;
        Ok(block_scale(&block_add_scaled(&a, &b, 1.0), 0.5))
    };
    let h = cfg.h3;
    let d = block_scale(&block_sub(&a11(h)?, &a11(-h)?), 1.0 / (2.0 * h));
    let tf = tangent_frame(&amb, frame, cfg)?;
    Ok(NablaDiagResult {
        vector: project_with(&tf, &amb, &d),
        tangent_condition: tf.condition,
    })
}

/// Max L² deviation of ρ(g)Φ(x) from Φ(gx) over seeded samples. The identity
/// is algebraically exact, so the deviation is pure roundoff.
pub fn check_equivariance(
    spec: &EmbeddingSpec,
    sample_count: usize,
    seed: u64,
) -> Result<f64, Error> {
    let amb = NumericAmbient::new(spec);
    let n = spec.n();
    let dim = n + 1;
    let mut worst: f64 = 0.0;
    for s in 0..sample_count {
        let mut rng = task_rng(seed, s as u64);
        let g = haar_unitary(&mut rng, dim);
        let x = random_unit_vector(&mut rng, dim);
        let gx: Vec<Complex64> = (0..dim)
            .map(|i| (0..dim).map(|j| g[i][j] * x[j]).sum())
            .collect();
        let mut acted_blocks = Vec::new();
        for (k, a) in spec.terms() {
            let p = expand_phi(&x, *k)?;
            let acted = group_act(&g, &p)?;
            let basis = PairBasis::new(n, *k);
            let mut v = basis.vectorize(&acted);
            let w = a.to_f64().unwrap();
            for c in v.iter_mut() {
                *c *= w;
            }
            acted_blocks.push(v);
        }
        let direct = amb.phi(&gx)?;
        worst = worst.max(amb.norm(&block_sub(&acted_blocks, &direct)));
    }
    Ok(worst)
}

/// Spread (max minus min) of the ambient norms of Φ over random points; the
/// orbit lies in a sphere, so the spread is pure roundoff.
pub fn orbit_norm_spread(
    spec: &EmbeddingSpec,
    sample_count: usize,
    seed: u64,
) -> Result<f64, Error> {
    let amb = NumericAmbient::new(spec);
    let dim = spec.n() + 1;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in 0..sample_count {
        let mut rng = task_rng(seed, s as u64);
        let x = random_unit_vector(&mut rng, dim);
        let norm = amb.norm(&amb.phi(&x)?);
        lo = lo.min(norm);
        hi = hi.max(norm);
    }
    Ok(hi - lo)
}

/// Monte Carlo sphere average of conj(m_{a,b}) m_{a',b'} for the reduced
/// monomials instantiated at u = e_{n+1}, w = e_1; the statistical oracle
/// behind the exact Gram matrix.
pub fn mc_reduced_gram_entry(
    n: usize,
    k: usize,
    a: usize,
    b: usize,
    a2: usize,
    b2: usize,
    sample_count: usize,
    seed: u64,
) -> Complex64 {
    let dim = n + 1;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut rng = task_rng(seed, 0);
    for _ in 0..sample_count {
        let z = random_unit_vector(&mut rng, dim);
        let x = z[dim - 1];
        let v = z[0];
        let m1 = x.powu((k - a) as u32)
            * v.powu(a as u32)
            * x.conj().powu((k - b) as u32)
            * v.conj().powu(b as u32);
        let m2 = x.powu((k - a2) as u32)
            * v.powu(a2 as u32)
            * x.conj().powu((k - b2) as u32)
            * v.conj().powu(b2 as u32);
        acc += m1.conj() * m2;
    }
    acc / sample_count as f64
}

/// Numeric value of an exact rational, for tolerance comparisons.
pub fn rational_to_f64(r: &num_rational::BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        first_fundamental, nabla_alpha11_perp, second_fundamental, split_sff,
    };
    use num_rational::BigRational;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        let mut bad = cfg();
        bad.h2 = 1e-13;
        assert!(matches!(bad.validate(), Err(Error::StepUnderflow(_))));
        let mut bad = cfg();
        bad.tol_rel3 = 1e-9;
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn first_derivative_matches_tangent_image() {
        let spec = EmbeddingSpec::single(1, 1).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        let amb = NumericAmbient::new(&spec);
        let fd = fd_curve_derivative(&spec, &frame, 1, &cfg()).unwrap();
        let exact = amb.embed(&frame, first_fundamental).unwrap();
        let rel = amb.relative_error(&fd, &exact);
        assert!(rel < 1e-7, "rel {rel}");
    }

    #[test]
    fn second_derivative_matches_alpha() {
        let spec = EmbeddingSpec::single(1, 2).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        let amb = NumericAmbient::new(&spec);
        let fd = fd_curve_derivative(&spec, &frame, 2, &cfg()).unwrap();
        let exact = amb.embed(&frame, second_fundamental).unwrap();
        let rel = amb.relative_error(&fd, &exact);
        assert!(rel < 1e-5, "rel {rel}");
    }

    #[test]
    fn second_derivative_is_normal() {
        // The even-order derivative pairs to zero with the tangent basis.
        let spec = EmbeddingSpec::single(2, 2).unwrap();
        let frame = Frame::<Complex64>::standard(2);
        let amb = NumericAmbient::new(&spec);
        let fd = fd_curve_derivative(&spec, &frame, 2, &cfg()).unwrap();
        let (projected, _) = normal_project(&spec, &frame, &fd, &cfg()).unwrap();
        let rel = amb.relative_error(&projected, &fd);
        assert!(rel < 1e-5, "tangential leakage {rel}");
    }

    #[test]
    fn halving_steps_improves_agreement() {
        let spec = EmbeddingSpec::single(1, 2).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        let amb = NumericAmbient::new(&spec);
        let exact = amb.embed(&frame, second_fundamental).unwrap();
        let coarse = fd_curve_derivative(&spec, &frame, 2, &cfg()).unwrap();
        let fine = fd_curve_derivative(&spec, &frame, 2, &cfg().halved()).unwrap();
        let e_coarse = amb.relative_error(&coarse, &exact);
        let e_fine = amb.relative_error(&fine, &exact);
        assert!(
            e_coarse / e_fine >= 3.0,
            "ratio {} (coarse {e_coarse}, fine {e_fine})",
            e_coarse / e_fine
        );
    }

    #[test]
    fn step_underflow_rejected() {
        let spec = EmbeddingSpec::single(1, 1).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        let mut bad = cfg();
        bad.h1 = 1e-13;
        assert!(matches!(
            fd_curve_derivative(&spec, &frame, 1, &bad),
            Err(Error::StepUnderflow(_))
        ));
    }

    #[test]
    fn unsupported_order_rejected() {
        let spec = EmbeddingSpec::single(1, 1).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        assert!(matches!(
            fd_curve_derivative(&spec, &frame, 4, &cfg()),
            Err(Error::UnsupportedOrder(4))
        ));
    }

    #[test]
    fn polarization_diagonal_agrees_with_projected_second_derivative() {
        let spec = EmbeddingSpec::single(1, 2).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        let amb = NumericAmbient::new(&spec);
        let diag = fd_alpha_polarized(&spec, &frame, frame.w(), &cfg()).unwrap();
        let d2 = fd_curve_derivative(&spec, &frame, 2, &cfg()).unwrap();
        let (alpha, _) = normal_project(&spec, &frame, &d2, &cfg()).unwrap();
        let rel = amb.relative_error(&diag, &alpha);
        assert!(rel < 1e-5, "rel {rel}");
    }

    #[test]
    fn polarization_with_j_rotation_gives_pluri_mean_curvature() {
        let spec = EmbeddingSpec::single(1, 2).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        let amb = NumericAmbient::new(&spec);
        let i = Complex64::new(0.0, 1.0);
        let jv: Vec<Complex64> = frame.w().iter().map(|c| c * i).collect();
        let avv = fd_alpha_polarized(&spec, &frame, frame.w(), &cfg()).unwrap();
        let jframe = Frame::new(frame.u().to_vec(), jv.clone()).unwrap();
        let ajj = fd_alpha_polarized(&spec, &jframe, &jv, &cfg()).unwrap();
        let mean = block_scale(&block_add_scaled(&avv, &ajj, 1.0), 0.5);
        let exact = amb
            .embed(&frame, |k| Ok(split_sff(k)?.alpha11))
            .unwrap();
        let rel = amb.relative_error(&mean, &exact);
        assert!(rel < 1e-5, "rel {rel}");
    }

    #[test]
    fn polarization_third_direction_is_weight_orthogonal() {
        // For a direction outside span{v, iv} the polarized form pairs to
        // zero with every reduced monomial of the (u, v) frame.
        let spec = EmbeddingSpec::single(2, 2).unwrap();
        let frame = Frame::<Complex64>::standard(2);
        let amb = NumericAmbient::new(&spec);
        let mut third = vec![Complex64::new(0.0, 0.0); 3];
        third[1] = Complex64::new(1.0, 0.0);
        let mixed = fd_alpha_polarized(&spec, &frame, &third, &cfg()).unwrap();
        let scale = amb.norm(&mixed).max(1.0);
        for a in 0..=2usize {
            for b in 0..=2usize {
                let m = ReducedPoly::monomial(
                    2,
                    a,
                    b,
                    crate::scalar::GaussianRational::one(),
                );
                let e = amb.embed(&frame, |_| Ok(m.clone())).unwrap();
                let pairing = amb.inner(&e, &mixed).abs();
                assert!(pairing / scale < 1e-5, "({a},{b}) pairing {pairing}");
            }
        }
    }

    #[test]
    fn polarization_rejects_non_horizontal() {
        let spec = EmbeddingSpec::single(1, 1).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        assert!(matches!(
            fd_alpha_polarized(&spec, &frame, frame.u(), &cfg()),
            Err(Error::NotHorizontal(_))
        ));
    }

    #[test]
    fn nabla_diagonal_vanishes_for_standard_embedding() {
        let spec = EmbeddingSpec::single(1, 1).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        let amb = NumericAmbient::new(&spec);
        let res = fd_nabla_alpha11_diagonal(&spec, &frame, &cfg()).unwrap();
        let alpha_norm = amb
            .norm(&amb.embed(&frame, second_fundamental).unwrap());
        assert!(
            amb.norm(&res.vector) < 1e-6 * alpha_norm,
            "residual {} vs alpha {alpha_norm}",
            amb.norm(&res.vector)
        );
    }

    #[test]
    fn nabla_diagonal_matches_exact_residual() {
        let spec = EmbeddingSpec::single(1, 2).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        let amb = NumericAmbient::new(&spec);
        let res = fd_nabla_alpha11_diagonal(&spec, &frame, &cfg()).unwrap();
        let exact = amb
            .embed(&frame, |k| nabla_alpha11_perp(k, 1))
            .unwrap();
        let rel = amb.relative_error(&res.vector, &exact);
        assert!(rel < 1e-3, "rel {rel}");
        assert!(res.tangent_condition.is_finite());
    }

    #[test]
    fn tangential_residue_is_fitted_by_tangent_basis() {
        let spec = EmbeddingSpec::single(1, 2).unwrap();
        let frame = Frame::<Complex64>::standard(1);
        let amb = NumericAmbient::new(&spec);
        // Raw outer difference without the final projection.
        let c = cfg();
        let a11 = |t: f64| {
            let fr = frame.advanced(t);
            let a = fd_alpha_polarized(&spec, &fr, fr.w(), &c).unwrap();
            let b = fd_alpha_polarized(
                &spec,
                &fr.j_rotated(),
                &fr.j_rotated().w().to_vec(),
                &c,
            )
            .unwrap();
            block_scale(&block_add_scaled(&a, &b, 1.0), 0.5)
        };
        let raw = block_scale(&block_sub(&a11(c.h3), &a11(-c.h3)), 1.0 / (2.0 * c.h3));
        let (projected, _) = normal_project(&spec, &frame, &raw, &c).unwrap();
        let diff = block_sub(&raw, &projected);
        // The difference is tangential: projecting it out again leaves
        // nothing beyond the third-derivative tolerance.
        let (leftover, _) = normal_project(&spec, &frame, &diff, &c).unwrap();
        let denom = amb.norm(&diff).max(amb.norm(&raw));
        assert!(amb.norm(&leftover) / denom < c.tol_rel3);
    }

    #[test]
    fn equivariance_and_sphericity_are_roundoff_level() {
        let spec = EmbeddingSpec::single(2, 1).unwrap();
        let dev = check_equivariance(&spec, 20, 3).unwrap();
        assert!(dev < 1e-10, "equivariance {dev}");
        let spread = orbit_norm_spread(&spec, 20, 3).unwrap();
        assert!(spread < 1e-10, "spread {spread}");
    }

    #[test]
    fn direct_sum_components_match_standalone_residuals() {
        let spec = EmbeddingSpec::new(
            1,
            vec![
                (1, BigRational::from_integer(1.into())),
                (2, BigRational::from_integer(1.into())),
            ],
        )
        .unwrap();
        let frame = Frame::<Complex64>::standard(1);
        let amb = NumericAmbient::new(&spec);
        let res = fd_nabla_alpha11_diagonal(&spec, &frame, &cfg()).unwrap();
        // Concatenated residual is nonzero.
        assert!(amb.norm(&res.vector) > 1e-3);
        // Componentwise: each block lands in the component's own normal
        // space after discarding the tangent-antidiagonal part. The k = 1
        // component is zero, the k = 2 component matches its standalone
        // exact value.
        let single1 = EmbeddingSpec::single(1, 1).unwrap();
        let single2 = EmbeddingSpec::single(1, 2).unwrap();
        let amb1 = NumericAmbient::new(&single1);
        let amb2 = NumericAmbient::new(&single2);
        let block1 = vec![amb.block(&res.vector, 1).unwrap()];
        let block2 = vec![amb.block(&res.vector, 2).unwrap()];
        let (comp1, _) = normal_project(&single1, &frame, &block1, &cfg()).unwrap();
        let (comp2, _) = normal_project(&single2, &frame, &block2, &cfg()).unwrap();
        let exact2 = amb2.embed(&frame, |k| nabla_alpha11_perp(k, 1)).unwrap();
        let scale = amb2.norm(&exact2);
        assert!(amb1.norm(&comp1) < 1e-3 * scale, "k=1 component {}", amb1.norm(&comp1));
        assert!(amb2.relative_error(&comp2, &exact2) < 1e-3);
    }

    #[test]
    fn monte_carlo_gram_oracle() {
        // 1/3 on the (0,0) diagonal at n = 1, k = 1.
        let v = mc_reduced_gram_entry(1, 1, 0, 0, 0, 0, 400_000, 11);
        assert!((v.re - 1.0 / 3.0).abs() < 5e-3, "got {v}");
        assert!(v.im.abs() < 5e-3);
        // The (1,0)-(2,1) coupling at n = 1, k = 2 is 1/30 (and clearly
        // not 1/20).
        let v = mc_reduced_gram_entry(1, 2, 1, 0, 2, 1, 400_000, 12);
        assert!((v.re - 1.0 / 30.0).abs() < 3e-3, "got {v}");
        assert!((v.re - 1.0 / 20.0).abs() > 1e-2, "got {v}");
        // Weight mismatch averages to zero.
        let v = mc_reduced_gram_entry(1, 1, 1, 0, 0, 1, 200_000, 13);
        assert!(v.norm() < 5e-3, "got {v}");
    }
}
