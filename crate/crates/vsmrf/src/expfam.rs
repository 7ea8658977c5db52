//! Catalog of minimal finite-dimensional exponential families with vector
//! sufficient statistics.
//!
//! Each family exposes its statistic map `B(x)`, base measure `C(x)` (zero by
//! convention for every catalog member; normalizing constants live inside the
//! log-partition), the log-partition `A(eta)` with gradient and Hessian,
//! direct sampling, strict feasibility checks on natural parameters, and the
//! point-inflated wrapper that augments any scalar family with atoms at chosen
//! values.

use crate::error::{Error, Result};
use ndarray::{Array1, Array2};
use rand::Rng;
use rand_distr::{Distribution, Gamma as GammaDist, Normal as NormalDist};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{digamma, ln_gamma};

/// Tolerance used when checking that simplex-valued samples sum to one.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Natural parameters are plain dense vectors; feasibility is checked against
/// the owning family's [`ParamConstraints`].
pub type NaturalParams = Array1<f64>;

/// A point at which a base family is inflated with an extra atom.
///
/// `in_base_domain` records whether the point already belongs to the base
/// family's value space; it controls whether the base statistics are evaluated
/// at the point or defined as zero there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InflationPoint {
    pub value: f64,
    pub in_base_domain: bool,
}

impl InflationPoint {
    pub fn new(value: f64, in_base_domain: bool) -> Self {
        InflationPoint {
            value,
            in_base_domain,
        }
    }

    /// Builds a point for `base`, computing domain membership from the base
    /// family's value space.
    pub fn for_base(base: &Family, value: f64) -> Self {
        InflationPoint {
            value,
            in_base_domain: base.value_in_domain(&[value]).is_ok(),
        }
    }
}

/// One open-interval bound on a natural-parameter coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub lo: f64,
    pub hi: f64,
}

impl Bound {
    pub const FREE: Bound = Bound {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn contains(&self, v: f64) -> bool {
        v.is_finite() && v > self.lo && v < self.hi
    }
}

/// Per-coordinate open-interval bounds plus optional affine equality
/// constraints `sum_i c_i eta_i = d` on natural parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamConstraints {
    pub bounds: Vec<Bound>,
    pub equalities: Vec<(Vec<f64>, f64)>,
}

impl ParamConstraints {
    fn free(dim: usize) -> Self {
        ParamConstraints {
            bounds: vec![Bound::FREE; dim],
            equalities: Vec::new(),
        }
    }
}

/// An exponential family from the catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Bernoulli,
    /// Statistics `(x, x^2)`; constraint `eta_2 < 0`.
    Gaussian,
    /// Statistics `(ln x, x)`; constraints `eta_1 > -1`, `eta_2 < 0`.
    Gamma,
    /// Statistics `(ln x_1, ..., ln x_k)` on the open simplex; `eta_j > -1`.
    Dirichlet(usize),
    /// `k`-valued categorical. The minimal form drops the reference category
    /// and carries `k - 1` indicator statistics; the overcomplete form keeps
    /// all `k` indicators and adds the equality constraint `sum eta_j = 0`.
    Categorical { k: usize, overcomplete: bool },
    /// Point-inflated wrapper around a scalar base family. Statistics are the
    /// atom indicators followed by the base statistics.
    Inflated {
        base: Box<Family>,
        points: Vec<InflationPoint>,
    },
}

impl Family {
    pub fn bernoulli() -> Family {
        Family::Bernoulli
    }

    pub fn gaussian() -> Family {
        Family::Gaussian
    }

    pub fn gamma() -> Family {
        Family::Gamma
    }

    pub fn dirichlet(k: usize) -> Result<Family> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!(
                "dirichlet requires k >= 2, got {k}"
            )));
        }
        Ok(Family::Dirichlet(k))
    }

    pub fn categorical(k: usize) -> Result<Family> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!(
                "categorical requires k >= 2, got {k}"
            )));
        }
        Ok(Family::Categorical {
            k,
            overcomplete: false,
        })
    }

    /// Overcomplete categorical: all `k` indicators plus the equality
    /// constraint. The solver handles it through its KKT-augmented Newton
    /// path; the minimal form is the catalog default.
    pub fn categorical_overcomplete(k: usize) -> Result<Family> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!(
                "categorical requires k >= 2, got {k}"
            )));
        }
        Ok(Family::Categorical {
            k,
            overcomplete: true,
        })
    }

    /// Dimension of the sufficient-statistic vector.
    pub fn stat_dim(&self) -> usize {
        match self {
            Family::Bernoulli => 1,
            Family::Gaussian | Family::Gamma => 2,
            Family::Dirichlet(k) => *k,
            Family::Categorical { k, overcomplete } => {
                if *overcomplete {
                    *k
                } else {
                    *k - 1
                }
            }
            Family::Inflated { base, points } => points.len() + base.stat_dim(),
        }
    }

    /// Number of raw columns a value of this family occupies.
    pub fn raw_dim(&self) -> usize {
        match self {
            Family::Dirichlet(k) => *k,
            Family::Inflated { base, .. } => base.raw_dim(),
            _ => 1,
        }
    }

    /// Whether the dominating measure is counting measure (every domain point
    /// is an atom of mass one).
    pub fn is_discrete(&self) -> bool {
        matches!(self, Family::Bernoulli | Family::Categorical { .. })
    }

    /// Human-readable description of the value space.
    pub fn domain_descriptor(&self) -> String {
        match self {
            Family::Bernoulli => "binary {0, 1}".into(),
            Family::Gaussian => "real line".into(),
            Family::Gamma => "positive reals".into(),
            Family::Dirichlet(k) => format!("open {}-simplex", k - 1),
            Family::Categorical { k, .. } => format!("finite set {{0, ..., {}}}", k - 1),
            Family::Inflated { base, points } => {
                let pts: Vec<String> = points.iter().map(|p| format!("{}", p.value)).collect();
                format!("{} + atoms {{{}}}", base.domain_descriptor(), pts.join(", "))
            }
        }
    }

    /// Open-interval bounds and equality constraints on natural parameters.
    pub fn constraints(&self) -> ParamConstraints {
        match self {
            Family::Bernoulli => ParamConstraints::free(1),
            Family::Gaussian => ParamConstraints {
                bounds: vec![
                    Bound::FREE,
                    Bound {
                        lo: f64::NEG_INFINITY,
                        hi: 0.0,
                    },
                ],
                equalities: Vec::new(),
            },
            Family::Gamma => ParamConstraints {
                bounds: vec![
                    Bound {
                        lo: -1.0,
                        hi: f64::INFINITY,
                    },
                    Bound {
                        lo: f64::NEG_INFINITY,
                        hi: 0.0,
                    },
                ],
                equalities: Vec::new(),
            },
            Family::Dirichlet(k) => ParamConstraints {
                bounds: vec![
                    Bound {
                        lo: -1.0,
                        hi: f64::INFINITY,
                    };
                    *k
                ],
                equalities: Vec::new(),
            },
            Family::Categorical { k, overcomplete } => {
                if *overcomplete {
                    ParamConstraints {
                        bounds: vec![Bound::FREE; *k],
                        equalities: vec![(vec![1.0; *k], 0.0)],
                    }
                } else {
                    ParamConstraints::free(*k - 1)
                }
            }
            Family::Inflated { base, points } => {
                let inner = base.constraints();
                let mut bounds = vec![Bound::FREE; points.len()];
                bounds.extend(inner.bounds);
                let equalities = inner
                    .equalities
                    .into_iter()
                    .map(|(c, d)| {
                        let mut shifted = vec![0.0; points.len()];
                        shifted.extend(c);
                        (shifted, d)
                    })
                    .collect();
                ParamConstraints { bounds, equalities }
            }
        }
    }

    /// Checks that `eta` is strictly feasible, reporting the violated bound.
    pub fn check_params(&self, eta: &[f64]) -> Result<()> {
        let cons = self.constraints();
        if eta.len() != cons.bounds.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} expects {} natural parameters, got {}",
                self.tag(),
                cons.bounds.len(),
                eta.len()
            )));
        }
        for (i, (&v, b)) in eta.iter().zip(&cons.bounds).enumerate() {
            if !b.contains(v) {
                return Err(Error::InfeasibleParams {
                    index: i,
                    value: v,
                    bound: format!("({}, {})", b.lo, b.hi),
                });
            }
        }
        for (c, d) in &cons.equalities {
            let s: f64 = c.iter().zip(eta).map(|(a, b)| a * b).sum();
            if (s - d).abs() > 1e-9 {
                return Err(Error::InfeasibleParams {
                    index: 0,
                    value: s,
                    bound: format!("equality sum = {d}"),
                });
            }
        }
        Ok(())
    }

    /// Validates a raw value against the family's domain.
    pub fn value_in_domain(&self, x: &[f64]) -> Result<()> {
        let fail = |reason: String| Err(Error::domain(self.tag(), reason));
        if x.len() != self.raw_dim() {
            return fail(format!(
                "expected {} raw coordinates, got {}",
                self.raw_dim(),
                x.len()
            ));
        }
        match self {
            Family::Bernoulli => {
                if x[0] == 0.0 || x[0] == 1.0 {
                    Ok(())
                } else {
                    fail(format!("{} is not in {{0, 1}}", x[0]))
                }
            }
            Family::Gaussian => {
                if x[0].is_finite() {
                    Ok(())
                } else {
                    fail("value not finite".into())
                }
            }
            Family::Gamma => {
                if x[0].is_finite() && x[0] > 0.0 {
                    Ok(())
                } else {
                    fail(format!("{} is not a positive real", x[0]))
                }
            }
            Family::Dirichlet(_) => {
                if x.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
                    return fail("simplex coordinates must be strictly positive".into());
                }
                let s: f64 = x.iter().sum();
                if (s - 1.0).abs() > SIMPLEX_TOL {
                    return fail(format!("simplex coordinates sum to {s}, not 1"));
                }
                Ok(())
            }
            Family::Categorical { k, .. } => {
                let v = x[0];
                if v.fract() == 0.0 && v >= 0.0 && (v as usize) < *k {
                    Ok(())
                } else {
                    fail(format!("{} is not a category index below {}", v, k))
                }
            }
            Family::Inflated { base, points } => {
                if points.iter().any(|p| p.value == x[0]) {
                    Ok(())
                } else {
                    base.value_in_domain(x)
                }
            }
        }
    }

    /// Sufficient statistics `B(x)`.
    pub fn sufficient_statistics(&self, x: &[f64]) -> Result<Array1<f64>> {
        self.value_in_domain(x)?;
        Ok(self.stats_unchecked(x))
    }

    fn stats_unchecked(&self, x: &[f64]) -> Array1<f64> {
        match self {
            Family::Bernoulli => Array1::from(vec![x[0]]),
            Family::Gaussian => Array1::from(vec![x[0], x[0] * x[0]]),
            Family::Gamma => Array1::from(vec![x[0].ln(), x[0]]),
            Family::Dirichlet(_) => x.iter().map(|v| v.ln()).collect(),
            Family::Categorical { k, overcomplete } => {
                let idx = x[0] as usize;
                if *overcomplete {
                    let mut b = Array1::zeros(*k);
                    b[idx] = 1.0;
                    b
                } else {
                    let mut b = Array1::zeros(*k - 1);
                    if idx > 0 {
                        b[idx - 1] = 1.0;
                    }
                    b
                }
            }
            Family::Inflated { base, points } => {
                let mut b = Array1::zeros(self.stat_dim());
                let hit = points.iter().position(|p| p.value == x[0]);
                match hit {
                    Some(i) => {
                        b[i] = 1.0;
                        if points[i].in_base_domain {
                            let inner = base.stats_unchecked(x);
                            b.slice_mut(ndarray::s![points.len()..]).assign(&inner);
                        }
                    }
                    None => {
                        let inner = base.stats_unchecked(x);
                        b.slice_mut(ndarray::s![points.len()..]).assign(&inner);
                    }
                }
                b
            }
        }
    }

    /// Base measure `C(x)`; identically zero for every catalog family, with
    /// normalizing constants folded into the log-partition.
    pub fn base_measure(&self, x: &[f64]) -> Result<f64> {
        self.value_in_domain(x)?;
        Ok(0.0)
    }

    /// Log-partition `A(eta)`.
    pub fn log_partition(&self, eta: &[f64]) -> Result<f64> {
        self.check_params(eta)?;
        Ok(self.log_partition_unchecked(eta))
    }

    fn log_partition_unchecked(&self, eta: &[f64]) -> f64 {
        match self {
            Family::Bernoulli => softplus(eta[0]),
            Family::Gaussian => {
                // A(eta) = -eta1^2 / (4 eta2) - 0.5 ln(-2 eta2) + 0.5 ln(2 pi)
                let (e1, e2) = (eta[0], eta[1]);
                -e1 * e1 / (4.0 * e2) - 0.5 * (-2.0 * e2).ln()
                    + 0.5 * (2.0 * std::f64::consts::PI).ln()
            }
            Family::Gamma => {
                // shape = eta1 + 1, rate = -eta2
                let (e1, e2) = (eta[0], eta[1]);
                ln_gamma(e1 + 1.0) - (e1 + 1.0) * (-e2).ln()
            }
            Family::Dirichlet(_) => {
                let sum_alpha: f64 = eta.iter().map(|e| e + 1.0).sum();
                eta.iter().map(|e| ln_gamma(e + 1.0)).sum::<f64>() - ln_gamma(sum_alpha)
            }
            Family::Categorical { overcomplete, .. } => {
                if *overcomplete {
                    log_sum_exp(eta)
                } else {
                    // reference category contributes exp(0)
                    let mut terms = Vec::with_capacity(eta.len() + 1);
                    terms.push(0.0);
                    terms.extend_from_slice(eta);
                    log_sum_exp(&terms)
                }
            }
            Family::Inflated { .. } => self.inflated_mass_terms(eta).log_total(),
        }
    }

    /// Gradient of the log-partition: the mean of the sufficient statistics.
    pub fn grad_log_partition(&self, eta: &[f64]) -> Result<Array1<f64>> {
        self.check_params(eta)?;
        Ok(self.grad_unchecked(eta))
    }

    fn grad_unchecked(&self, eta: &[f64]) -> Array1<f64> {
        match self {
            Family::Bernoulli => Array1::from(vec![sigmoid(eta[0])]),
            Family::Gaussian => {
                let (e1, e2) = (eta[0], eta[1]);
                let mean = -e1 / (2.0 * e2);
                Array1::from(vec![mean, e1 * e1 / (4.0 * e2 * e2) - 1.0 / (2.0 * e2)])
            }
            Family::Gamma => {
                let (e1, e2) = (eta[0], eta[1]);
                Array1::from(vec![digamma(e1 + 1.0) - (-e2).ln(), -(e1 + 1.0) / e2])
            }
            Family::Dirichlet(_) => {
                let sum_alpha: f64 = eta.iter().map(|e| e + 1.0).sum();
                let psi_total = digamma(sum_alpha);
                eta.iter().map(|e| digamma(e + 1.0) - psi_total).collect()
            }
            Family::Categorical { overcomplete, .. } => {
                let a = self.log_partition_unchecked(eta);
                if *overcomplete {
                    eta.iter().map(|e| (e - a).exp()).collect()
                } else {
                    eta.iter().map(|e| (e - a).exp()).collect()
                }
            }
            Family::Inflated { base, points } => {
                let terms = self.inflated_mass_terms(eta);
                let log_total = terms.log_total();
                let eta_base = &eta[points.len()..];
                let grad_base = base.grad_unchecked(eta_base);
                let dim = self.stat_dim();
                let mut g = Array1::zeros(dim);
                // atom probabilities
                for (i, t) in terms.atoms.iter().enumerate() {
                    g[i] = (t.log_weight - log_total).exp();
                }
                // base-statistic mean: atoms contribute B(j), the continuous
                // remainder contributes grad A_base minus the removed atoms.
                let w_base = (terms.log_base - log_total).exp();
                let mut base_part = &grad_base * w_base;
                for t in &terms.atoms {
                    if let Some(bj) = &t.base_stats {
                        let p = (t.log_weight - log_total).exp();
                        base_part = base_part + bj * p;
                        if t.removes_base_atom {
                            let q = (t.log_shift - log_total).exp();
                            base_part = base_part - bj * q;
                        }
                    }
                }
                g.slice_mut(ndarray::s![points.len()..]).assign(&base_part);
                g
            }
        }
    }

    /// Hessian of the log-partition: the covariance of the statistics.
    pub fn hessian_log_partition(&self, eta: &[f64]) -> Result<Array2<f64>> {
        self.check_params(eta)?;
        Ok(self.hessian_unchecked(eta))
    }

    fn hessian_unchecked(&self, eta: &[f64]) -> Array2<f64> {
        match self {
            Family::Bernoulli => {
                let p = sigmoid(eta[0]);
                Array2::from_elem((1, 1), p * (1.0 - p))
            }
            Family::Gaussian => {
                let (e1, e2) = (eta[0], eta[1]);
                let h11 = -1.0 / (2.0 * e2);
                let h12 = e1 / (2.0 * e2 * e2);
                let h22 = -e1 * e1 / (2.0 * e2 * e2 * e2) + 1.0 / (2.0 * e2 * e2);
                ndarray::arr2(&[[h11, h12], [h12, h22]])
            }
            Family::Gamma => {
                let (e1, e2) = (eta[0], eta[1]);
                let h11 = trigamma(e1 + 1.0);
                let h12 = -1.0 / e2;
                let h22 = (e1 + 1.0) / (e2 * e2);
                ndarray::arr2(&[[h11, h12], [h12, h22]])
            }
            Family::Dirichlet(k) => {
                let sum_alpha: f64 = eta.iter().map(|e| e + 1.0).sum();
                let c = trigamma(sum_alpha);
                let mut h = Array2::from_elem((*k, *k), -c);
                for i in 0..*k {
                    h[[i, i]] += trigamma(eta[i] + 1.0);
                }
                h
            }
            Family::Categorical { .. } => {
                let p = self.grad_unchecked(eta);
                let k = p.len();
                let mut h = Array2::zeros((k, k));
                for i in 0..k {
                    for j in 0..k {
                        h[[i, j]] = if i == j { p[i] * (1.0 - p[i]) } else { -p[i] * p[j] };
                    }
                }
                h
            }
            Family::Inflated { base, points } => {
                let terms = self.inflated_mass_terms(eta);
                let log_total = terms.log_total();
                let np = points.len();
                let eta_base = &eta[np..];
                let grad_base = base.grad_unchecked(eta_base);
                let hess_base = base.hessian_unchecked(eta_base);
                let dim = self.stat_dim();
                let mb = base.stat_dim();

                // Second-moment matrix E[B B^T] assembled from the mixture.
                let mut m2 = Array2::zeros((dim, dim));
                let mut mean = Array1::zeros(dim);
                let w_base = (terms.log_base - log_total).exp();

                // continuous remainder contributes base moments only
                let base_m2 =
                    &hess_base + &outer(&grad_base, &grad_base);
                for a in 0..mb {
                    mean[np + a] += w_base * grad_base[a];
                    for b in 0..mb {
                        m2[[np + a, np + b]] += w_base * base_m2[[a, b]];
                    }
                }
                for (i, t) in terms.atoms.iter().enumerate() {
                    let p = (t.log_weight - log_total).exp();
                    mean[i] += p;
                    m2[[i, i]] += p;
                    if let Some(bj) = &t.base_stats {
                        for a in 0..mb {
                            mean[np + a] += p * bj[a];
                            m2[[i, np + a]] += p * bj[a];
                            m2[[np + a, i]] += p * bj[a];
                            for b in 0..mb {
                                m2[[np + a, np + b]] += p * bj[a] * bj[b];
                            }
                        }
                        if t.removes_base_atom {
                            let q = (t.log_shift - log_total).exp();
                            for a in 0..mb {
                                mean[np + a] -= q * bj[a];
                                for b in 0..mb {
                                    m2[[np + a, np + b]] -= q * bj[a] * bj[b];
                                }
                            }
                        }
                    }
                }
                m2 - outer(&mean, &mean)
            }
        }
    }

    /// Draws one value from the family at `eta`, writing the raw coordinates
    /// into `out`. Reproducible given the caller's seeded generator.
    pub fn sample_into<R: Rng + ?Sized>(
        &self,
        eta: &[f64],
        rng: &mut R,
        out: &mut [f64],
    ) -> Result<()> {
        self.check_params(eta)?;
        debug_assert_eq!(out.len(), self.raw_dim());
        self.sample_unchecked(eta, rng, out);
        Ok(())
    }

    /// Draws one value, returning a freshly allocated raw-coordinate vector.
    pub fn sample<R: Rng + ?Sized>(&self, eta: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.raw_dim()];
        self.sample_into(eta, rng, &mut out)?;
        Ok(out)
    }

    fn sample_unchecked<R: Rng + ?Sized>(&self, eta: &[f64], rng: &mut R, out: &mut [f64]) {
        match self {
            Family::Bernoulli => {
                let p = sigmoid(eta[0]);
                out[0] = if rng.random::<f64>() < p { 1.0 } else { 0.0 };
            }
            Family::Gaussian => {
                let sigma2 = -1.0 / (2.0 * eta[1]);
                let mean = eta[0] * sigma2;
                let n = NormalDist::new(mean, sigma2.sqrt()).expect("checked params");
                out[0] = n.sample(rng);
            }
            Family::Gamma => {
                let shape = eta[0] + 1.0;
                let scale = -1.0 / eta[1];
                let g = GammaDist::new(shape, scale).expect("checked params");
                // Guard against underflow to exactly zero at tiny shapes.
                loop {
                    let v = g.sample(rng);
                    if v > 0.0 {
                        out[0] = v;
                        break;
                    }
                }
            }
            Family::Dirichlet(k) => {
                // normalized independent Gamma(alpha_j, 1) draws
                let mut sum = 0.0;
                for j in 0..*k {
                    let g = GammaDist::new(eta[j] + 1.0, 1.0).expect("checked params");
                    let v = loop {
                        let v = g.sample(rng);
                        if v > 0.0 {
                            break v;
                        }
                    };
                    out[j] = v;
                    sum += v;
                }
                for j in 0..*k {
                    out[j] /= sum;
                }
            }
            Family::Categorical { k, overcomplete } => {
                let logits: Vec<f64> = if *overcomplete {
                    eta.to_vec()
                } else {
                    let mut l = vec![0.0];
                    l.extend_from_slice(eta);
                    l
                };
                let a = log_sum_exp(&logits);
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                let mut pick = *k - 1;
                for (j, lg) in logits.iter().enumerate() {
                    acc += (lg - a).exp();
                    if u < acc {
                        pick = j;
                        break;
                    }
                }
                out[0] = pick as f64;
            }
            Family::Inflated { base, points } => {
                let terms = self.inflated_mass_terms(eta);
                let log_total = terms.log_total();
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                for (i, t) in terms.atoms.iter().enumerate() {
                    acc += (t.log_weight - log_total).exp();
                    if u < acc {
                        out[0] = points[i].value;
                        return;
                    }
                }
                // continuous / residual part: redraw past atoms the base
                // measure already covers
                let eta_base = &eta[points.len()..];
                loop {
                    base.sample_unchecked(eta_base, rng, out);
                    let collides = points
                        .iter()
                        .any(|p| p.in_base_domain && base.is_discrete() && p.value == out[0]);
                    if !collides {
                        return;
                    }
                }
            }
        }
    }

    /// A strictly feasible natural-parameter vector with comfortable margin
    /// from every open bound; equality constraints hold exactly.
    pub fn feasible_point(&self) -> Array1<f64> {
        match self {
            Family::Bernoulli => Array1::zeros(1),
            Family::Gaussian => Array1::from(vec![0.0, -0.5]),
            Family::Gamma => Array1::from(vec![0.0, -1.0]),
            Family::Dirichlet(k) => Array1::zeros(*k),
            Family::Categorical { k, overcomplete } => {
                if *overcomplete {
                    Array1::zeros(*k)
                } else {
                    Array1::zeros(*k - 1)
                }
            }
            Family::Inflated { base, points } => {
                let mut v = vec![0.0; points.len()];
                v.extend(base.feasible_point());
                Array1::from(v)
            }
        }
    }

    /// Wraps `base` with atoms at the given points.
    pub fn inflate(base: Family, points: Vec<InflationPoint>) -> Result<Family> {
        if base.raw_dim() != 1 {
            return Err(Error::InvalidArgument(format!(
                "point inflation requires a scalar base family, got {}",
                base.tag()
            )));
        }
        // Flatten nested inflation: new points sit in front of old ones.
        let (inner_base, mut all_points) = match base {
            Family::Inflated { base, points } => (*base, points),
            other => (other, Vec::new()),
        };
        let mut combined = points;
        combined.append(&mut all_points);
        for i in 0..combined.len() {
            for j in (i + 1)..combined.len() {
                if combined[i].value == combined[j].value {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate inflation point {}",
                        combined[i].value
                    )));
                }
            }
        }
        if combined.is_empty() {
            return Err(Error::InvalidArgument(
                "inflation requires at least one point".into(),
            ));
        }
        Ok(Family::Inflated {
            base: Box::new(inner_base),
            points: combined,
        })
    }

    /// Mass bookkeeping for the inflated log-partition: per-atom weights
    /// `exp(eta_i + <eta_base, B(j_i)>)`, the base-mass term `exp(A_base)`,
    /// and the removed base atoms for points the base measure already covers.
    fn inflated_mass_terms(&self, eta: &[f64]) -> InflatedTerms {
        let (base, points) = match self {
            Family::Inflated { base, points } => (base, points),
            _ => unreachable!("inflated_mass_terms on non-inflated family"),
        };
        let np = points.len();
        let eta_base = &eta[np..];
        let log_base = base.log_partition_unchecked(eta_base);
        let atoms = points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let base_stats = if p.in_base_domain {
                    Some(base.stats_unchecked(&[p.value]))
                } else {
                    None
                };
                let shift = base_stats
                    .as_ref()
                    .map(|b| b.iter().zip(eta_base).map(|(s, e)| s * e).sum())
                    .unwrap_or(0.0);
                InflatedAtom {
                    log_weight: eta[i] + shift,
                    log_shift: shift,
                    removes_base_atom: p.in_base_domain && base.is_discrete(),
                    base_stats,
                }
            })
            .collect();
        InflatedTerms { atoms, log_base }
    }

    /// Canonical string tag used by schema files.
    pub fn tag(&self) -> String {
        match self {
            Family::Bernoulli => "bernoulli".into(),
            Family::Gaussian => "gaussian".into(),
            Family::Gamma => "gamma".into(),
            Family::Dirichlet(k) => format!("dirichlet:{k}"),
            Family::Categorical { k, overcomplete } => {
                if *overcomplete {
                    format!("categorical-full:{k}")
                } else {
                    format!("categorical:{k}")
                }
            }
            Family::Inflated { base, points } => {
                let pts: Vec<String> = points.iter().map(|p| format!("{}", p.value)).collect();
                format!("inflated:{}:{}", base.tag(), pts.join(","))
            }
        }
    }

    /// Parses a family tag: `bernoulli`, `gaussian`, `gamma`, `dirichlet:k`,
    /// `categorical:k`, `categorical-full:k`, `inflated:<base>:<points>`.
    pub fn parse_tag(tag: &str) -> Result<Family> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        let parts: Vec<&str> = tag.split(':').collect();
        match parts[0] {
            "bernoulli" if parts.len() == 1 => Ok(Family::Bernoulli),
            "gaussian" if parts.len() == 1 => Ok(Family::Gaussian),
            "gamma" if parts.len() == 1 => Ok(Family::Gamma),
            "dirichlet" if parts.len() == 2 => {
                let k = parts[1]
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad dirichlet arity in {tag}")))?;
                Family::dirichlet(k)
            }
            "categorical" if parts.len() == 2 => {
                let k = parts[1].parse().map_err(|_| {
                    Error::InvalidArgument(format!("bad categorical arity in {tag}"))
                })?;
                Family::categorical(k)
            }
            "categorical-full" if parts.len() == 2 => {
                let k = parts[1].parse().map_err(|_| {
                    Error::InvalidArgument(format!("bad categorical arity in {tag}"))
                })?;
                Family::categorical_overcomplete(k)
            }
            "inflated" if parts.len() >= 3 => {
                let base_tag = parts[1..parts.len() - 1].join(":");
                let base = Family::parse_tag(&base_tag)?;
                let mut points = Vec::new();
                for ps in parts[parts.len() - 1].split(',') {
                    let v: f64 = ps.trim().parse().map_err(|_| {
                        Error::InvalidArgument(format!("bad inflation point '{ps}' in {tag}"))
                    })?;
                    points.push(InflationPoint::for_base(&base, v));
                }
                Family::inflate(base, points)
            }
            _ => bad(format!("unknown family tag '{tag}'")),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.tag())
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let tag = String::deserialize(d)?;
        Family::parse_tag(&tag).map_err(serde::de::Error::custom)
    }
}

struct InflatedAtom {
    /// log of the atom's unnormalized mass: eta_i + <eta_base, B(j_i)>
    log_weight: f64,
    /// log of the base mass removed at the point when it is a base atom
    log_shift: f64,
    removes_base_atom: bool,
    base_stats: Option<Array1<f64>>,
}

struct InflatedTerms {
    atoms: Vec<InflatedAtom>,
    log_base: f64,
}

impl InflatedTerms {
    /// log( sum_i exp(w_i) - sum_{removed} exp(s_i) + exp(A_base) )
    fn log_total(&self) -> f64 {
        let mut max = self.log_base;
        for a in &self.atoms {
            max = max.max(a.log_weight);
            if a.removes_base_atom {
                max = max.max(a.log_shift);
            }
        }
        let mut sum = (self.log_base - max).exp();
        for a in &self.atoms {
            sum += (a.log_weight - max).exp();
            if a.removes_base_atom {
                sum -= (a.log_shift - max).exp();
            }
        }
        max + sum.ln()
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x
    } else {
        x.exp().ln_1p()
    }
}

pub(crate) fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn outer(a: &Array1<f64>, b: &Array1<f64>) -> Array2<f64> {
    let (n, m) = (a.len(), b.len());
    let mut out = Array2::zeros((n, m));
    for i in 0..n {
        for j in 0..m {
            out[[i, j]] = a[i] * b[j];
        }
    }
    out
}

/// Trigamma via the recurrence to x >= 6 followed by the asymptotic series.
pub(crate) fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 6.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // 1/x + 1/(2x^2) + B2/x^3 - B4/x^5 ...
    acc + inv
        + 0.5 * inv2
        + inv * inv2 * (1.0 / 6.0 + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0 - inv2 / 30.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fd_grad(fam: &Family, eta: &[f64]) -> Array1<f64> {
        let h = 1e-6;
        let mut g = Array1::zeros(eta.len());
        for i in 0..eta.len() {
            let mut ep = eta.to_vec();
            let mut em = eta.to_vec();
            ep[i] += h;
            em[i] -= h;
            g[i] = (fam.log_partition(&ep).unwrap() - fam.log_partition(&em).unwrap()) / (2.0 * h);
        }
        g
    }

    fn fd_hessian(fam: &Family, eta: &[f64]) -> Array2<f64> {
        let h = 1e-5;
        let d = eta.len();
        let mut out = Array2::zeros((d, d));
        for i in 0..d {
            let mut ep = eta.to_vec();
            let mut em = eta.to_vec();
            ep[i] += h;
            em[i] -= h;
            let gp = fam.grad_log_partition(&ep).unwrap();
            let gm = fam.grad_log_partition(&em).unwrap();
            for j in 0..d {
                out[[i, j]] = (gp[j] - gm[j]) / (2.0 * h);
            }
        }
        out
    }

    #[test]
    fn statistics_match_catalog() {
        assert_eq!(
            Family::Bernoulli.sufficient_statistics(&[1.0]).unwrap(),
            Array1::from(vec![1.0])
        );
        assert_eq!(
            Family::Gaussian.sufficient_statistics(&[2.0]).unwrap(),
            Array1::from(vec![2.0, 4.0])
        );
        assert_eq!(
            Family::Gamma.sufficient_statistics(&[1.0]).unwrap(),
            Array1::from(vec![0.0, 1.0])
        );
        let third = 1.0 / 3.0;
        let b = Family::Dirichlet(3)
            .sufficient_statistics(&[third, third, third])
            .unwrap();
        for v in b.iter() {
            assert_abs_diff_eq!(*v, -1.098612, epsilon = 1e-6);
        }
    }

    #[test]
    fn base_measure_is_zero() {
        assert_eq!(Family::Bernoulli.base_measure(&[0.0]).unwrap(), 0.0);
        assert_eq!(Family::Gaussian.base_measure(&[5.0]).unwrap(), 0.0);
        assert_eq!(Family::Gamma.base_measure(&[2.0]).unwrap(), 0.0);
    }

    #[test]
    fn domain_violations_rejected() {
        assert!(Family::Gamma.sufficient_statistics(&[-1.0]).is_err());
        assert!(Family::Bernoulli.sufficient_statistics(&[0.5]).is_err());
        assert!(Family::Dirichlet(3)
            .sufficient_statistics(&[0.5, 0.4, 0.2])
            .is_err());
    }

    #[test]
    fn log_partition_values() {
        // standard normal in natural coordinates, with the 2-pi constant folded in
        let a = Family::Gaussian.log_partition(&[0.0, -0.5]).unwrap();
        assert_abs_diff_eq!(a, 0.9189385, epsilon = 1e-6);
        let a = Family::Bernoulli.log_partition(&[0.0]).unwrap();
        assert_abs_diff_eq!(a, std::f64::consts::LN_2, epsilon = 1e-12);
        // integral of exp(-x) over (0, inf) is 1
        let a = Family::Gamma.log_partition(&[0.0, -1.0]).unwrap();
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn infeasible_eta_rejected_with_bound() {
        let err = Family::Gaussian.log_partition(&[0.0, 0.5]).unwrap_err();
        match err {
            Error::InfeasibleParams { index, value, .. } => {
                assert_eq!(index, 1);
                assert_eq!(value, 0.5);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(Family::Gamma.log_partition(&[-1.5, -1.0]).is_err());
    }

    #[test]
    fn gradients_match_moments() {
        let g = Family::Bernoulli.grad_log_partition(&[0.0]).unwrap();
        assert_abs_diff_eq!(g[0], 0.5, epsilon = 1e-12);
        let g = Family::Gaussian.grad_log_partition(&[0.0, -0.5]).unwrap();
        assert_abs_diff_eq!(g[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cases: Vec<(Family, usize)> = vec![
            (Family::Bernoulli, 1),
            (Family::Gaussian, 2),
            (Family::Gamma, 2),
            (Family::Dirichlet(3), 3),
            (Family::categorical(4).unwrap(), 3),
            (
                Family::inflate(
                    Family::Gamma,
                    vec![InflationPoint::new(0.0, false)],
                )
                .unwrap(),
                3,
            ),
        ];
        for (fam, dim) in cases {
            for _ in 0..20 {
                let eta = random_feasible(&fam, dim, &mut rng);
                let g = fam.grad_log_partition(&eta).unwrap();
                let gf = fd_grad(&fam, &eta);
                for i in 0..dim {
                    let scale = g[i].abs().max(1.0);
                    assert!(
                        (g[i] - gf[i]).abs() / scale < 1e-5,
                        "{} grad[{i}] {} vs fd {}",
                        fam.tag(),
                        g[i],
                        gf[i]
                    );
                }
                let h = fam.hessian_log_partition(&eta).unwrap();
                let hf = fd_hessian(&fam, &eta);
                for i in 0..dim {
                    for j in 0..dim {
                        let scale = h[[i, j]].abs().max(1.0);
                        assert!(
                            (h[[i, j]] - hf[[i, j]]).abs() / scale < 1e-4,
                            "{} hess[{i},{j}] {} vs fd {}",
                            fam.tag(),
                            h[[i, j]],
                            hf[[i, j]]
                        );
                    }
                }
            }
        }
    }

    fn random_feasible<R: Rng>(fam: &Family, dim: usize, rng: &mut R) -> Vec<f64> {
        let cons = fam.constraints();
        (0..dim)
            .map(|i| {
                let b = cons.bounds[i];
                let lo = if b.lo.is_finite() { b.lo + 0.1 } else { -2.0 };
                let hi = if b.hi.is_finite() { b.hi - 0.1 } else { 2.0 };
                lo + (hi - lo) * rng.random::<f64>()
            })
            .collect()
    }

    #[test]
    fn inflated_bernoulli_normalizer() {
        // atom at zero collapses to log(exp(eta0) + exp(eta1))
        let fam = Family::inflate(
            Family::Bernoulli,
            vec![InflationPoint::new(0.0, true)],
        )
        .unwrap();
        for (e0, e1) in [(0.3, -0.7), (-1.0, 2.0), (0.0, 0.0)] {
            let a = fam.log_partition(&[e0, e1]).unwrap();
            assert_abs_diff_eq!(a, log_sum_exp(&[e0, e1]), epsilon = 1e-12);
        }
    }

    #[test]
    fn inflated_gamma_normalizer() {
        // zero lies outside the gamma domain, so the indicator term vanishes
        let fam = Family::inflate(Family::Gamma, vec![InflationPoint::new(0.0, false)]).unwrap();
        let (e0, e1, e2) = (0.4, 0.3, -1.2);
        let a = fam.log_partition(&[e0, e1, e2]).unwrap();
        let a_base = Family::Gamma.log_partition(&[e1, e2]).unwrap();
        assert_abs_diff_eq!(a, log_sum_exp(&[e0, a_base]), epsilon = 1e-12);
    }

    #[test]
    fn inflate_rejects_duplicates() {
        assert!(Family::inflate(
            Family::Gamma,
            vec![
                InflationPoint::new(0.0, false),
                InflationPoint::new(0.0, false)
            ],
        )
        .is_err());
    }

    #[test]
    fn nested_inflation_flattens() {
        let one = Family::inflate(Family::Gamma, vec![InflationPoint::new(0.0, false)]).unwrap();
        let two = Family::inflate(one, vec![InflationPoint::new(25.0, true)]).unwrap();
        assert_eq!(two.stat_dim(), 4);
        match &two {
            Family::Inflated { points, .. } => {
                assert_eq!(points[0].value, 25.0);
                assert_eq!(points[1].value, 0.0);
            }
            _ => panic!("expected inflated"),
        }
    }

    #[test]
    fn feasible_points_match_catalog() {
        assert_eq!(
            Family::Gaussian.feasible_point(),
            Array1::from(vec![0.0, -0.5])
        );
        assert_eq!(Family::Gamma.feasible_point(), Array1::from(vec![0.0, -1.0]));
        assert_eq!(Family::Dirichlet(3).feasible_point(), Array1::<f64>::zeros(3));
        for fam in [
            Family::Bernoulli,
            Family::Gaussian,
            Family::Gamma,
            Family::Dirichlet(3),
            Family::categorical(3).unwrap(),
            Family::categorical_overcomplete(3).unwrap(),
        ] {
            let fp = fam.feasible_point();
            fam.check_params(fp.as_slice().unwrap()).unwrap();
        }
    }

    #[test]
    fn sample_means_match_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 100_000;
        for (fam, eta) in [
            (Family::Bernoulli, vec![0.0]),
            (Family::Gaussian, vec![0.0, -0.5]),
            (Family::Gamma, vec![0.5, -1.0]),
        ] {
            let grad = fam.grad_log_partition(&eta).unwrap();
            let hess = fam.hessian_log_partition(&eta).unwrap();
            let mut mean = Array1::<f64>::zeros(fam.stat_dim());
            for _ in 0..n {
                let x = fam.sample(&eta, &mut rng).unwrap();
                mean = mean + fam.sufficient_statistics(&x).unwrap();
            }
            mean /= n as f64;
            for i in 0..fam.stat_dim() {
                let se = (hess[[i, i]] / n as f64).sqrt();
                assert!(
                    (mean[i] - grad[i]).abs() < 3.0 * se + 1e-9,
                    "{} coord {i}: {} vs {} (se {se})",
                    fam.tag(),
                    mean[i],
                    grad[i]
                );
            }
        }
    }

    #[test]
    fn inflated_sampling_hits_atoms() {
        let fam = Family::inflate(Family::Gamma, vec![InflationPoint::new(0.0, false)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // large eta0 relative to A(eta1) pushes all mass onto the atom
        let eta = vec![12.0, 0.0, -1.0];
        let zeros = (0..2000)
            .filter(|_| fam.sample(&eta, &mut rng).unwrap()[0] == 0.0)
            .count();
        assert!(zeros as f64 / 2000.0 > 0.99);
    }

    #[test]
    fn tags_round_trip() {
        for tag in [
            "bernoulli",
            "gaussian",
            "gamma",
            "dirichlet:3",
            "categorical:4",
            "categorical-full:3",
            "inflated:gamma:0",
            "inflated:gamma:0,25.5",
            "inflated:bernoulli:0",
        ] {
            let fam = Family::parse_tag(tag).unwrap();
            assert_eq!(fam.tag(), tag);
        }
        assert!(Family::parse_tag("poisson").is_err());
        assert!(Family::parse_tag("dirichlet").is_err());
    }

    #[test]
    fn overcomplete_categorical_checks_equality() {
        let fam = Family::categorical_overcomplete(3).unwrap();
        assert!(fam.check_params(&[0.5, -0.2, -0.3]).is_ok());
        assert!(fam.check_params(&[0.5, 0.2, 0.3]).is_err());
    }

    #[test]
    fn deterministic_under_seed() {
        let fam = Family::Gaussian;
        let draw = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..10)
                .map(|_| fam.sample(&[0.3, -0.7], &mut rng).unwrap()[0])
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }
}
