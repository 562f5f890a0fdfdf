//! Finite discrete distributions and their characteristic functions.
//!
//! The characteristic function of `Σ wⱼ·δ_{aⱼ}` is the trigonometric
//! polynomial `t ↦ Σ wⱼ·e^{i⟨t,aⱼ⟩}`, which this module represents and
//! evaluates exactly (up to double rounding). No simplification is performed
//! when going from distribution to polynomial: term j is exactly
//! `(weightⱼ, atomⱼ)`.

use num_complex::Complex64;
use serde::Deserialize;

use crate::Error;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Probability distribution with finitely many atoms in `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    dim: usize,
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl DiscreteDistribution {
    /// Validates and builds a distribution.
    ///
    /// Every weight must be positive, weights must sum to 1 within `1e-12`,
    /// atoms must be pairwise distinct (exact coordinate comparison) and each
    /// of length `dim`.
    pub fn new(dim: usize, atoms: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: atoms.len(), got: weights.len() });
        }
        for a in &atoms {
            if a.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
            }
            if a.iter().any(|x| !x.is_finite()) {
                return Err(Error::ParseDistribution("non-finite atom coordinate".into()));
            }
        }
        for &w in &weights {
            if w <= 0.0 || !w.is_finite() {
                return Err(Error::NonPositiveWeight(w));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightsDoNotSumToOne(sum));
        }
        for i in 0..atoms.len() {
            for j in (i + 1)..atoms.len() {
                if atoms[i].iter().zip(&atoms[j]).all(|(a, b)| a.to_bits() == b.to_bits()) {
                    return Err(Error::DuplicateAtom(i, j));
                }
            }
        }
        Ok(Self { dim, atoms, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Vec<f64>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The characteristic function as a trigonometric polynomial: term j is
    /// exactly `(weightⱼ, atomⱼ)`.
    pub fn char_poly(&self) -> TrigPolynomial {
        TrigPolynomial {
            dim: self.dim,
            terms: self
                .weights
                .iter()
                .zip(&self.atoms)
                .map(|(&w, a)| Term { weight: w, frequency: a.clone() })
                .collect(),
        }
    }

    /// Embeds into `R^target_dim`: atom coordinates are placed at the given
    /// 1-based `slots`, zero elsewhere; weights are unchanged. The resulting
    /// characteristic function evaluated at `t` equals the original evaluated
    /// at the slot coordinates of `t`.
    pub fn embed(&self, target_dim: usize, slots: &[usize]) -> Result<Self, Error> {
        if target_dim < self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: target_dim });
        }
        if slots.len() != self.dim {
            return Err(Error::InvalidSlots);
        }
        for (i, &s) in slots.iter().enumerate() {
            if s == 0 || s > target_dim || slots[..i].contains(&s) {
                return Err(Error::InvalidSlots);
            }
        }
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let mut out = vec![0.0; target_dim];
                for (&s, &c) in slots.iter().zip(a) {
                    out[s - 1] = c;
                }
                out
            })
            .collect();
        Ok(Self { dim: target_dim, atoms, weights: self.weights.clone() })
    }

    /// Built-in distribution `1/3·δ_{(0,1)} + 1/3·δ_{(1,0)} + 1/3·δ_{(1,1)}`
    /// on `R²`, the CLI's `paper-mu`.
    pub fn builtin_mu() -> Self {
        let third = 1.0 / 3.0;
        Self::new(
            2,
            vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]],
            vec![third, third, third],
        )
        .expect("builtin distribution is valid")
    }
}

/// One term `w·e^{i⟨t,a⟩}` of a trigonometric polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub weight: f64,
    pub frequency: Vec<f64>,
}

/// Finite sum `t ↦ Σⱼ wⱼ·e^{i⟨t,aⱼ⟩}` with real weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    dim: usize,
    terms: Vec<Term>,
}

impl TrigPolynomial {
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for t in &terms {
            if t.frequency.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: t.frequency.len() });
            }
        }
        Ok(Self { dim, terms })
    }

    /// The constant polynomial `c` (single term with zero frequency).
    pub fn constant(dim: usize, c: f64) -> Self {
        Self { dim, terms: vec![Term { weight: c, frequency: vec![0.0; dim] }] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn sum_abs_weights(&self) -> f64 {
        self.terms.iter().map(|t| t.weight.abs()).sum()
    }

    /// Evaluates `Σⱼ wⱼ·(cos⟨t,aⱼ⟩ + i·sin⟨t,aⱼ⟩)` in double precision.
    pub fn eval(&self, t: &[f64]) -> Result<Complex64, Error> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: t.len() });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            // Same association order as the interval enclosure: sequential
            // sum of coordinate products, then weight times cos/sin.
            let theta = term.frequency.iter().zip(t).fold(0.0, |s, (a, x)| s + a * x);
            acc += Complex64::new(term.weight * theta.cos(), term.weight * theta.sin());
        }
        Ok(acc)
    }

    /// Pointwise product: outer product of the term sets with frequencies
    /// added and weights multiplied; terms with exactly equal frequency
    /// vectors are merged by weight addition. First-occurrence term order.
    pub fn multiply(&self, other: &Self) -> Result<Self, Error> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut terms: Vec<Term> = Vec::new();
        let mut index: std::collections::HashMap<Vec<u64>, usize> = std::collections::HashMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let freq: Vec<f64> =
                    a.frequency.iter().zip(&b.frequency).map(|(x, y)| x + y).collect();
                let key: Vec<u64> = freq.iter().map(|x| x.to_bits()).collect();
                let w = a.weight * b.weight;
                match index.get(&key) {
                    Some(&i) => terms[i].weight += w,
                    None => {
                        index.insert(key, terms.len());
                        terms.push(Term { weight: w, frequency: freq });
                    }
                }
            }
        }
        Ok(Self { dim: self.dim, terms })
    }
}

/// Parses a weight literal: either a plain number or an exact fraction
/// `"p/q"` converted by a single double-precision division.
pub fn parse_weight(s: &str) -> Result<f64, Error> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| Error::InvalidWeight(s.into()))?;
        let q: i64 = q.trim().parse().map_err(|_| Error::InvalidWeight(s.into()))?;
        if q == 0 {
            return Err(Error::InvalidWeight(s.into()));
        }
        Ok(p as f64 / q as f64)
    } else {
        s.parse().map_err(|_| Error::InvalidWeight(s.into()))
    }
}

#[derive(Deserialize)]
struct DistFile {
    dim: usize,
    atoms: Vec<Vec<f64>>,
    weights: Vec<WeightLit>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightLit {
    Num(f64),
    Lit(String),
}

/// Parses the distribution file format: a JSON document with fields `dim`,
/// `atoms` (array of dim-length numeric arrays) and `weights` (array of
/// numbers or `"p/q"` strings).
pub fn parse_distribution(text: &str) -> Result<DiscreteDistribution, Error> {
    let file: DistFile =
        serde_json::from_str(text).map_err(|e| Error::ParseDistribution(e.to_string()))?;
    let weights = file
        .weights
        .iter()
        .map(|w| match w {
            WeightLit::Num(x) => Ok(*x),
            WeightLit::Lit(s) => parse_weight(s),
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    DiscreteDistribution::new(file.dim, file.atoms, weights)
}
