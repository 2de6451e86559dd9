//! Weight vectors, exponent vectors and weight-degree constellations.
//!
//! The enumeration is complete for true Gorenstein Fano constellations of
//! the types (3,1), (3,2) and (3,3). Candidates are generated from the tail
//! of the exponent vector belonging to the smallest degree, which is bounded
//! by the harmonic form of the Fano inequality; the one unbounded tail
//! family per type is swept up to a configurable cutoff.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The ambient dimension handled by the enumeration.
pub const DIMENSION: usize = 3;

/// Default sweep cutoff for the unbounded tail families.
pub const DEFAULT_CUTOFF: u64 = 100;

/// Ascending, almost free vector of `1 + d + c` positive weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    d: usize,
    c: usize,
    w: Vec<u64>,
}

impl WeightVector {
    pub fn new(d: usize, c: usize, w: Vec<u64>) -> Result<Self> {
        if w.len() != 1 + d + c {
            return Err(Error::InvalidWeights(format!(
                "type ({d},{c}) needs {} weights, got {}",
                1 + d + c,
                w.len()
            )));
        }
        if w.contains(&0) {
            return Err(Error::InvalidWeights("weights must be positive".into()));
        }
        if w.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::InvalidWeights(format!("{w:?} is not ascending")));
        }
        if !is_almost_free_weights(&w) {
            return Err(Error::InvalidWeights(format!("{w:?} is not almost free")));
        }
        Ok(WeightVector { d, c, w })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn weights(&self) -> &[u64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn lcm(&self) -> u64 {
        self.w.iter().fold(1, |a, &b| a.lcm(&b))
    }
}

/// Every subset obtained by dropping one entry has gcd one.
pub fn is_almost_free_weights(w: &[u64]) -> bool {
    (0..w.len()).all(|skip| {
        w.iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .fold(0u64, |g, (_, &x)| g.gcd(&x))
            == 1
    })
}

/// Exponents `l_i` with `l_i * w_i = mu` for all `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    l: Vec<u64>,
    mu: u64,
}

impl ExponentVector {
    pub fn new(w: &WeightVector, mu: u64) -> Result<Self> {
        let l = w
            .weights()
            .iter()
            .map(|&wi| {
                if mu.is_multiple_of(wi) {
                    Ok(mu / wi)
                } else {
                    Err(Error::InvalidConstellation(format!(
                        "degree {mu} is not divisible by weight {wi}"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExponentVector { l, mu })
    }

    pub fn exponents(&self) -> &[u64] {
        &self.l
    }

    pub fn degree(&self) -> u64 {
        self.mu
    }

    /// The smallest exponent is at least two.
    pub fn is_true(&self) -> bool {
        self.l.last().is_some_and(|&x| x >= 2)
    }
}

/// A weight vector together with its ascending relation degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightDegreeConstellation {
    w: WeightVector,
    mu: Vec<u64>,
}

impl WeightDegreeConstellation {
    /// Degrees are sorted on construction; each must be divisible by every
    /// weight.
    pub fn new(w: WeightVector, mut mu: Vec<u64>) -> Result<Self> {
        if mu.len() != w.c() {
            return Err(Error::InvalidConstellation(format!(
                "codimension {} needs {} degrees, got {}",
                w.c(),
                w.c(),
                mu.len()
            )));
        }
        mu.sort_unstable();
        for &m in &mu {
            ExponentVector::new(&w, m)?;
        }
        Ok(WeightDegreeConstellation { w, mu })
    }

    /// Convenience constructor from raw slices.
    pub fn from_parts(d: usize, weights: &[u64], degrees: &[u64]) -> Result<Self> {
        let w = WeightVector::new(d, degrees.len(), weights.to_vec())?;
        Self::new(w, degrees.to_vec())
    }

    pub fn weight_vector(&self) -> &WeightVector {
        &self.w
    }

    pub fn weights(&self) -> &[u64] {
        self.w.weights()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.mu
    }

    pub fn d(&self) -> usize {
        self.w.d()
    }

    pub fn c(&self) -> usize {
        self.w.c()
    }
}

impl fmt::Display for WeightDegreeConstellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights().iter().map(u64::to_string).collect();
        let mu: Vec<String> = self.mu.iter().map(u64::to_string).collect();
        write!(f, "({}; {})", w.join(", "), mu.join(", "))
    }
}

pub fn exponent_tuple(k: &WeightDegreeConstellation) -> Vec<ExponentVector> {
    k.mu.iter()
        .map(|&m| ExponentVector::new(&k.w, m).expect("checked at construction"))
        .collect()
}

/// Sum of the weights exceeds the sum of the degrees.
pub fn is_fano(k: &WeightDegreeConstellation) -> bool {
    k.weights().iter().sum::<u64>() > k.mu.iter().sum::<u64>()
}

/// The harmonic form: `sum_i 1 / (l_{1,i} + ... + l_{c,i}) > 1`.
pub fn is_fano_harmonic(k: &WeightDegreeConstellation) -> bool {
    let ls = exponent_tuple(k);
    let sum = (0..k.w.len())
        .map(|i| {
            let col: u64 = ls.iter().map(|l| l.l[i]).sum();
            BigRational::new(BigInt::one(), BigInt::from(col))
        })
        .fold(BigRational::zero(), |a, b| a + b);
    sum > BigRational::one()
}

pub fn is_true(k: &WeightDegreeConstellation) -> bool {
    let wmax = *k.weights().last().expect("nonempty weights");
    k.mu.iter().all(|&m| m >= 2 * wmax)
}

/// For every choice of `1 + c` indices, the gcd of their weights divides
/// the sum of the remaining `d` weights.
pub fn is_gorenstein_weights(w: &WeightVector) -> bool {
    let n = w.len();
    let total: u64 = w.weights().iter().sum();
    index_subsets(n, 1 + w.c()).into_iter().all(|subset| {
        let g = subset.iter().fold(0u64, |g, &i| g.gcd(&w.weights()[i]));
        let inside: u64 = subset.iter().map(|&i| w.weights()[i]).sum();
        (total - inside).is_multiple_of(g)
    })
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn unit_fraction(den: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(den))
}

/// Length of the exponent tail used for codimension `c`, and how many
/// leading exponents (each at least the first tail entry) precede it.
fn tail_shape(d: usize, c: usize) -> (usize, usize) {
    if c == 1 {
        (3, d - 1)
    } else {
        (d + c, 1)
    }
}

/// Descending tails `t_1 >= ... >= t_k >= 2` that extend to an exponent
/// vector satisfying the harmonic Fano bound for the smallest degree,
/// `sum 1/(c l_i) > 1`, with every entry capped at `max_first`.
///
/// For `c = 1` these are the triples `(l_3, l_4, l_5)`; for `c >= 2` the
/// tails `(l_2, ..., l_{1+d+c})`.
pub fn tail_candidates(d: usize, c: usize, max_first: u64) -> BTreeSet<Vec<u64>> {
    let (len, leading) = tail_shape(d, c);
    let scale = c as u64;
    let mut out = BTreeSet::new();
    // built from the smallest entry upwards
    let mut ascending: Vec<u64> = Vec::with_capacity(len);
    fn rec(
        ascending: &mut Vec<u64>,
        fixed: BigRational,
        len: usize,
        leading: usize,
        scale: u64,
        cap: u64,
        out: &mut BTreeSet<Vec<u64>>,
    ) {
        if ascending.len() == len {
            let top = *ascending.last().expect("nonempty tail");
            let total = fixed + unit_fraction(scale * top) * BigInt::from(leading as u64);
            if total > BigRational::one() {
                out.insert(ascending.iter().rev().copied().collect());
            }
            return;
        }
        let still_open = (len - ascending.len() + leading) as u64;
        let mut v = ascending.last().copied().unwrap_or(2);
        while v <= cap {
            let best = fixed.clone() + unit_fraction(scale * v) * BigInt::from(still_open);
            if best <= BigRational::one() {
                break;
            }
            ascending.push(v);
            rec(
                ascending,
                fixed.clone() + unit_fraction(scale * v),
                len,
                leading,
                scale,
                cap,
                out,
            );
            ascending.pop();
            v += 1;
        }
    }
    rec(
        &mut ascending,
        BigRational::zero(),
        len,
        leading,
        scale,
        max_first,
        &mut out,
    );
    out
}

/// Knobs for [`search_constellations`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest tail entry swept in the unbounded families.
    pub cutoff: u64,
    /// Drop candidates whose weight vector is not Gorenstein.
    pub gorenstein_filter: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            cutoff: DEFAULT_CUTOFF,
            gorenstein_filter: true,
        }
    }
}

/// True Gorenstein Fano weight-degree constellations of type `(3, c)`,
/// `c` in `{1, 2, 3}`.
pub fn enumerate_constellations(d: usize, c: usize) -> Result<BTreeSet<WeightDegreeConstellation>> {
    enumerate_constellations_with(d, c, SearchOptions::default())
}

pub fn enumerate_constellations_with(
    d: usize,
    c: usize,
    options: SearchOptions,
) -> Result<BTreeSet<WeightDegreeConstellation>> {
    if d != DIMENSION || !(1..=3).contains(&c) {
        return Err(Error::UnsupportedType { d, c });
    }
    Ok(search_constellations(d, c, options))
}

/// The bounding search behind [`enumerate_constellations`], without the
/// restriction on `c`. Used to probe codimensions beyond the classified
/// range.
pub fn search_constellations(
    d: usize,
    c: usize,
    options: SearchOptions,
) -> BTreeSet<WeightDegreeConstellation> {
    let mut out = BTreeSet::new();
    if c == 0 || d != DIMENSION {
        return out;
    }
    let accept = |k: WeightDegreeConstellation, out: &mut BTreeSet<WeightDegreeConstellation>| {
        if is_true(&k)
            && is_fano(&k)
            && (!options.gorenstein_filter || is_gorenstein_weights(k.weight_vector()))
        {
            out.insert(k);
        }
    };
    if c == 1 {
        for k in codim_one_candidates(d, options.cutoff) {
            accept(k, &mut out);
        }
    } else {
        for tail in tail_candidates(d, c, options.cutoff) {
            for k in smallest_degree_candidates(d, c, &tail) {
                accept(k, &mut out);
            }
        }
    }
    out
}

/// Candidates of type `(3,1)` from the triples `(l_3, l_4, l_5)`: with
/// `lambda = lcm(l_3, l_4, l_5)` the weights are
/// `(w_1, w_2, omega lambda/l_3, omega lambda/l_4, omega lambda/l_5)` where
/// `w_1, w_2 | lambda` and `omega | (w_1 + w_2) / gcd(w_1, w_2)`.
fn codim_one_candidates(d: usize, cutoff: u64) -> Vec<WeightDegreeConstellation> {
    let mut out = Vec::new();
    for tail in tail_candidates(d, 1, cutoff) {
        let lambda = tail.iter().fold(1u64, |a, &b| a.lcm(&b));
        let lambda_parts: Vec<u64> = tail.iter().map(|&l| lambda / l).collect();
        let divs = divisors(lambda);
        for (a, &w1) in divs.iter().enumerate() {
            for &w2 in &divs[a..] {
                let bound = (w1 + w2) / w1.gcd(&w2);
                for omega in divisors(bound) {
                    let mut w = vec![w1, w2];
                    w.extend(lambda_parts.iter().map(|&p| p * omega));
                    let Ok(wv) = WeightVector::new(d, 1, w) else {
                        continue;
                    };
                    if let Ok(k) = WeightDegreeConstellation::new(wv, vec![lambda * omega]) {
                        out.push(k);
                    }
                }
            }
        }
    }
    out
}

/// Candidates of type `(3, c)`, `c >= 2`, whose smallest degree has the
/// given exponent tail `(l_2, ..., l_n)`. That degree equals
/// `lcm(l_2, ..., l_n)`; the further degrees are multiples of `lcm(w)`
/// kept below the Fano bound.
fn smallest_degree_candidates(d: usize, c: usize, tail: &[u64]) -> Vec<WeightDegreeConstellation> {
    let mut out = Vec::new();
    let mu1 = tail.iter().fold(1u64, |a, &b| a.lcm(&b));
    for l1 in divisors(mu1) {
        if l1 < tail[0] {
            continue;
        }
        let mut w = vec![mu1 / l1];
        w.extend(tail.iter().map(|&l| mu1 / l));
        let Ok(wv) = WeightVector::new(d, c, w) else {
            continue;
        };
        let step = wv.lcm();
        let wsum: u64 = wv.weights().iter().sum();
        let wmax = *wv.weights().last().expect("nonempty");
        let mut degrees = vec![mu1];
        extend_degrees(&wv, step, wsum, wmax, c, &mut degrees, &mut out);
    }
    out
}

fn extend_degrees(
    wv: &WeightVector,
    step: u64,
    wsum: u64,
    wmax: u64,
    c: usize,
    degrees: &mut Vec<u64>,
    out: &mut Vec<WeightDegreeConstellation>,
) {
    if degrees.len() == c {
        if let Ok(k) = WeightDegreeConstellation::new(wv.clone(), degrees.clone()) {
            out.push(k);
        }
        return;
    }
    let last = *degrees.last().expect("smallest degree present");
    let mut m = last.div_ceil(step).max(1) * step;
    m = m.max(step * (2 * wmax).div_ceil(step));
    loop {
        let used: u64 = degrees.iter().sum::<u64>() + m * (c - degrees.len()) as u64;
        if used >= wsum {
            break;
        }
        degrees.push(m);
        extend_degrees(wv, step, wsum, wmax, c, degrees, out);
        degrees.pop();
        m += step;
    }
}

/// Gorenstein weight vectors of type `(3,1)` admitting an exponent vector
/// `(l_1, l_2, y, 2, 2)`, swept over `y <= cutoff`.
pub fn gorenstein_weights_with_tail_22(cutoff: u64) -> BTreeSet<Vec<u64>> {
    codim_one_candidates(DIMENSION, cutoff)
        .into_iter()
        .filter(|k| {
            let l = &exponent_tuple(k)[0];
            l.l[3] == 2 && l.l[4] == 2 && is_gorenstein_weights(k.weight_vector())
        })
        .map(|k| k.weights().to_vec())
        .collect()
}

/// Exponent vectors `(l_1, l_2, 2, 2, 2, 2)` of Gorenstein weight vectors
/// of type `(3,2)`, swept over `l_2 <= cutoff`.
pub fn gorenstein_exponents_with_tail_2222(cutoff: u64) -> BTreeSet<Vec<u64>> {
    let mut out = BTreeSet::new();
    for l2 in 2..=cutoff {
        let tail = [l2, 2, 2, 2, 2];
        let mu = l2.lcm(&2);
        for l1 in divisors(mu) {
            if l1 < l2 {
                continue;
            }
            let mut w = vec![mu / l1];
            w.extend(tail.iter().map(|&l| mu / l));
            if let Ok(wv) = WeightVector::new(DIMENSION, 2, w) {
                if is_gorenstein_weights(&wv) {
                    let mut l = vec![l1];
                    l.extend(tail);
                    out.insert(l);
                }
            }
        }
    }
    out
}
