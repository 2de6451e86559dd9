//! Finite abelian groups, degree matrices over `Z x Γ` and their
//! classification up to isomorphism.
//!
//! Homogeneous degree matrices with a fixed weight vector correspond to
//! lattices `L` squeezed between the lattice `H` spanned by the binomial
//! exponent differences `l_{j,i} e_i - l_{j,1} e_1` and the kernel `M` of
//! the weight vector: the matrix is the projection `Z^n -> Z^n / L` and its
//! torsion part is `M / L`. Since `M / H` is finite, enumerating degree
//! matrices up to automorphisms of `Z x Γ` fixing `Z` amounts to
//! enumerating subgroups of `M / H`. Column permutations preserving the
//! weights then identify isomorphic ones.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::constellations::{exponent_tuple, index_subsets, WeightDegreeConstellation};
use crate::error::{Error, Result};
use crate::zlattice::{
    cokernel_structure, hermite_normal_form, kernel_lattice, smith_normal_form, solve_diophantine,
    unimodular_inverse, IntMatrix,
};

/// Default bound on the group order accepted by [`automorphisms`].
pub const DEFAULT_AUTOMORPHISM_LIMIT: u64 = 1 << 12;

/// Bound on the number of generator-image tuples the automorphism search
/// may visit.
const IMAGE_SEARCH_LIMIT: u64 = 1 << 24;

/// `Z/n_1 x ... x Z/n_k` in standard form, `n_k | ... | n_1`, every
/// `n_i >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

/// Residues modulo the invariant factors of the ambient group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&n| n < 2) {
            return Err(Error::InvalidGroup(format!(
                "invariant factors must be at least 2, got {factors:?}"
            )));
        }
        if factors.windows(2).any(|p| p[0] % p[1] != 0) {
            return Err(Error::InvalidGroup(format!(
                "{factors:?} is not a divisibility chain n_k | ... | n_1"
            )));
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup::default()
    }

    /// Standard form of `Z/a_1 x ... x Z/a_m` for arbitrary positive `a_i`.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("cyclic orders must be positive".into()));
        }
        let mut diag = IntMatrix::zeros(orders.len(), orders.len());
        for (i, &a) in orders.iter().enumerate() {
            diag.set(i, i, BigInt::from(a));
        }
        let factors = cokernel_structure(&diag)
            .into_iter()
            .map(|f| f.to_u64().expect("factor fits"))
            .collect();
        FiniteAbelianGroup::new(factors)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// The element with the given coordinates, reduced.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidGroup(format!(
                "{} coordinates for a group of rank {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &n)| x.rem_euclid(n as i64) as u64)
                .collect(),
        })
    }

    pub(crate) fn reduce_big(&self, coords: &[BigInt]) -> GroupElement {
        GroupElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(x, &n)| x.mod_floor(&BigInt::from(n)).to_u64().expect("residue"))
                .collect(),
        }
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.coords.len() == self.rank() && a.coords.iter().zip(&self.factors).all(|(&x, &n)| x < n)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        }
    }

    pub fn scale(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &n)| {
                    let n = n as i128;
                    (((x as i128) * (k as i128)).rem_euclid(n)) as u64
                })
                .collect(),
        }
    }

    /// All elements in lexicographic order of their coordinates.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![Vec::new()];
        for &n in &self.factors {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u64>| {
                    (0..n).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|coords| GroupElement { coords })
            .collect()
    }

    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| n / x.gcd(&n))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    pub fn span(&self, gens: &[GroupElement]) -> Vec<GroupElement> {
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let zero = self.zero();
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// One generating set per subgroup.
    pub fn subgroups(&self) -> Vec<Vec<GroupElement>> {
        subgroup_generators(&self.factors)
            .into_iter()
            .map(|gens| {
                gens.iter()
                    .map(|g| self.element(g).expect("rank matches"))
                    .filter(|g| !g.is_zero())
                    .collect()
            })
            .collect()
    }
}

/// Group automorphism given by the images of the standard generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    images: Vec<GroupElement>,
}

impl Automorphism {
    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn apply(&self, g: &FiniteAbelianGroup, x: &GroupElement) -> GroupElement {
        x.coords
            .iter()
            .zip(&self.images)
            .fold(g.zero(), |acc, (&c, img)| {
                g.add(&acc, &g.scale(img, c as i64))
            })
    }
}

pub fn automorphisms(g: &FiniteAbelianGroup) -> Result<Vec<Automorphism>> {
    automorphisms_with_limit(g, DEFAULT_AUTOMORPHISM_LIMIT)
}

/// All automorphisms of `g`, enumerated as generator-image tuples: the
/// image of the `i`-th generator is killed by `n_i` and the first `i`
/// images generate a subgroup of order `n_1 ... n_i`.
pub fn automorphisms_with_limit(g: &FiniteAbelianGroup, limit: u64) -> Result<Vec<Automorphism>> {
    let order = g.order();
    if order > limit {
        return Err(Error::GroupTooLarge { order, limit });
    }
    let elements = g.elements();
    let candidates: Vec<Vec<GroupElement>> = g
        .factors
        .iter()
        .map(|&n| {
            elements
                .iter()
                .filter(|x| g.scale(x, n as i64).is_zero())
                .cloned()
                .collect()
        })
        .collect();
    let space = candidates
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .unwrap_or(u64::MAX);
    if space > IMAGE_SEARCH_LIMIT {
        return Err(Error::GroupTooLarge { order, limit });
    }

    fn rec(
        g: &FiniteAbelianGroup,
        candidates: &[Vec<GroupElement>],
        chosen: &mut Vec<GroupElement>,
        expected: u64,
        out: &mut Vec<Automorphism>,
    ) {
        let i = chosen.len();
        if i == candidates.len() {
            out.push(Automorphism {
                images: chosen.clone(),
            });
            return;
        }
        let expected = expected * g.factors[i];
        for y in &candidates[i] {
            chosen.push(y.clone());
            if g.span(chosen).len() as u64 == expected {
                rec(g, candidates, chosen, expected, out);
            }
            chosen.pop();
        }
    }
    let mut out = Vec::new();
    rec(g, &candidates, &mut Vec::new(), 1, &mut out);
    Ok(out)
}

/// A degree matrix `Q = [q_1 ... q_n]` in `K = Z x Γ` whose free row is the
/// weight vector of a constellation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeMatrix {
    constellation: WeightDegreeConstellation,
    gamma: FiniteAbelianGroup,
    eta: Vec<GroupElement>,
}

impl DegreeMatrix {
    /// Checks shapes, reduced coordinates and homogeneity.
    pub fn new(
        constellation: WeightDegreeConstellation,
        gamma: FiniteAbelianGroup,
        eta: Vec<GroupElement>,
    ) -> Result<Self> {
        let n = constellation.weights().len();
        if eta.len() != n {
            return Err(Error::InvalidDegreeMatrix(format!(
                "{} torsion columns for {n} weights",
                eta.len()
            )));
        }
        if let Some(bad) = eta.iter().find(|e| !gamma.contains(e)) {
            return Err(Error::InvalidDegreeMatrix(format!(
                "{:?} is not a reduced element of {:?}",
                bad.coords, gamma.factors
            )));
        }
        if !is_homogeneous(&constellation, &gamma, &eta) {
            return Err(Error::InvalidDegreeMatrix(
                "torsion parts are not homogeneous for the relation degrees".into(),
            ));
        }
        Ok(DegreeMatrix {
            constellation,
            gamma,
            eta,
        })
    }

    /// Builds the matrix from its torsion rows, one per invariant factor.
    pub fn from_torsion_rows(
        constellation: WeightDegreeConstellation,
        gamma: FiniteAbelianGroup,
        rows: &[Vec<i64>],
    ) -> Result<Self> {
        let n = constellation.weights().len();
        if rows.len() != gamma.rank() || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDegreeMatrix(format!(
                "expected {} torsion rows of length {n}",
                gamma.rank()
            )));
        }
        let eta = (0..n)
            .map(|i| gamma.element(&rows.iter().map(|r| r[i]).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        DegreeMatrix::new(constellation, gamma, eta)
    }

    pub fn trivial(constellation: WeightDegreeConstellation) -> Self {
        let n = constellation.weights().len();
        DegreeMatrix {
            constellation,
            gamma: FiniteAbelianGroup::trivial(),
            eta: vec![GroupElement::default(); n],
        }
    }

    pub fn constellation(&self) -> &WeightDegreeConstellation {
        &self.constellation
    }

    pub fn gamma(&self) -> &FiniteAbelianGroup {
        &self.gamma
    }

    pub fn eta(&self) -> &[GroupElement] {
        &self.eta
    }

    pub fn weights(&self) -> &[u64] {
        self.constellation.weights()
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    pub fn torsion_rows(&self) -> Vec<Vec<u64>> {
        (0..self.gamma.rank())
            .map(|r| self.eta.iter().map(|e| e.coords[r]).collect())
            .collect()
    }

    /// Integer representative of `Q`, of shape `(1 + k) x n`.
    pub fn lifted(&self) -> IntMatrix {
        let mut rows: Vec<Vec<u64>> = vec![self.weights().to_vec()];
        rows.extend(self.torsion_rows());
        IntMatrix::from_rows(&rows)
    }

    /// Columns `(0, n_i e_i)` spanning the kernel of `Z^{1+k} -> K`.
    pub fn relations(&self) -> IntMatrix {
        let k = self.gamma.rank();
        let mut r = IntMatrix::zeros(1 + k, k);
        for (i, &n) in self.gamma.factors.iter().enumerate() {
            r.set(1 + i, i, BigInt::from(n));
        }
        r
    }

    /// `[Q | relations]`.
    pub fn presentation(&self) -> IntMatrix {
        self.lifted()
            .hstack(&self.relations())
            .expect("row counts agree")
    }

    /// Hermite basis (as rows) of the kernel of `Z^n -> K`.
    pub fn kernel(&self) -> IntMatrix {
        let n = self.len();
        let ker = kernel_lattice(&self.presentation());
        let rows: Vec<Vec<BigInt>> = ker
            .columns()
            .into_iter()
            .map(|col| col[..n].to_vec())
            .collect();
        hermite_normal_form(&IntMatrix::from_rows(&rows))
    }
}

/// `l_{j,i} η_i` does not depend on `i` for every relation `j`.
pub fn is_homogeneous(
    constellation: &WeightDegreeConstellation,
    gamma: &FiniteAbelianGroup,
    eta: &[GroupElement],
) -> bool {
    exponent_tuple(constellation).iter().all(|l| {
        let first = gamma.scale(&eta[0], l.exponents()[0] as i64);
        l.exponents()
            .iter()
            .zip(eta)
            .all(|(&e, x)| gamma.scale(x, e as i64) == first)
    })
}

/// For every split into `1 + c` and `d` columns, the sum of the `d`
/// columns lies in the subgroup generated by the other `1 + c`.
pub fn is_gorenstein_matrix(q: &DegreeMatrix) -> bool {
    let n = q.len();
    let c = q.constellation.c();
    let lifted = q.lifted();
    let relations = q.relations();
    index_subsets(n, 1 + c).into_iter().all(|chosen| {
        let cols: Vec<Vec<BigInt>> = chosen.iter().map(|&i| lifted.column(i)).collect();
        let generators = IntMatrix::from_columns(&cols, lifted.rows())
            .hstack(&relations)
            .expect("row counts agree");
        let mut target = vec![BigInt::zero(); lifted.rows()];
        for j in (0..n).filter(|j| !chosen.contains(j)) {
            for (t, x) in target.iter_mut().zip(lifted.column(j)) {
                *t += x;
            }
        }
        matches!(solve_diophantine(&generators, &target), Ok(Some(_)))
    })
}

/// Any `n - 1` columns generate `K`.
pub fn is_almost_free(q: &DegreeMatrix) -> bool {
    let n = q.len();
    let lifted = q.lifted();
    let relations = q.relations();
    (0..n).all(|skip| {
        let cols: Vec<Vec<BigInt>> = (0..n)
            .filter(|&i| i != skip)
            .map(|i| lifted.column(i))
            .collect();
        let m = IntMatrix::from_columns(&cols, lifted.rows())
            .hstack(&relations)
            .expect("row counts agree");
        cokernel_structure(&m).is_empty()
    })
}

/// The fwps data of a degree matrix up to isomorphism: the canonical
/// representative and the number of `(φ, γ_0)` pairs fixing it up to
/// column permutations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixClass {
    pub representative: DegreeMatrix,
    pub stabilizer_order: u64,
}

/// Lexicographically smallest arrangement under weight-preserving column
/// permutations.
fn sort_weight_blocks<T: Ord>(weights: &[u64], eta: &mut [T]) {
    let mut start = 0;
    while start < weights.len() {
        let end = (start..weights.len())
            .find(|&i| weights[i] != weights[start])
            .unwrap_or(weights.len());
        eta[start..end].sort();
        start = end;
    }
}

pub fn canonical_form(q: &DegreeMatrix) -> Result<DegreeMatrix> {
    Ok(canonical_class(q)?.representative)
}

/// Minimum of the orbit of `q` under automorphisms of `K` fixing `Z`,
/// `η_i -> φ(η_i) + w_i γ_0`, and weight-preserving column permutations,
/// compared column-major.
pub fn canonical_class(q: &DegreeMatrix) -> Result<MatrixClass> {
    let g = &q.gamma;
    let autos = automorphisms(g)?;
    let elements = g.elements();
    // elements are listed lexicographically, so indices compare like coordinates
    let index = |x: &GroupElement| elements.binary_search(x).expect("element of the group");
    let size = elements.len();
    let sum: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| index(&g.add(a, b))).collect())
        .collect();
    let eta: Vec<usize> = q.eta.iter().map(index).collect();
    let weights = q.weights();
    let shifted: Vec<Vec<usize>> = (0..size)
        .map(|s| {
            weights
                .iter()
                .map(|&w| index(&g.scale(&elements[s], w as i64)))
                .collect()
        })
        .collect();

    let mut best: Option<Vec<usize>> = None;
    let mut hits = 0u64;
    let mut image = vec![0usize; eta.len()];
    for phi in &autos {
        let table: Vec<usize> = elements.iter().map(|x| index(&phi.apply(g, x))).collect();
        for shift in &shifted {
            for (i, &x) in eta.iter().enumerate() {
                image[i] = sum[table[x]][shift[i]];
            }
            sort_weight_blocks(weights, &mut image);
            match &best {
                Some(b) if image > *b => {}
                Some(b) if image == *b => hits += 1,
                _ => {
                    best = Some(image.clone());
                    hits = 1;
                }
            }
        }
    }
    let best = best.expect("identity is always an automorphism");
    Ok(MatrixClass {
        representative: DegreeMatrix {
            constellation: q.constellation.clone(),
            gamma: g.clone(),
            eta: best.into_iter().map(|i| elements[i].clone()).collect(),
        },
        stabilizer_order: hits,
    })
}

/// Quotient `Γ -> Γ / Γ_0` in standard form, as the target group and an
/// integer matrix acting on coordinates.
pub fn quotient_map(
    gamma: &FiniteAbelianGroup,
    subgroup: &[GroupElement],
) -> Result<(FiniteAbelianGroup, IntMatrix)> {
    if let Some(bad) = subgroup.iter().find(|g| !gamma.contains(g)) {
        return Err(Error::InvalidGroup(format!(
            "{:?} does not lie in {:?}",
            bad.coords, gamma.factors
        )));
    }
    let k = gamma.rank();
    let mut cols: Vec<Vec<u64>> = Vec::new();
    for (i, &n) in gamma.factors.iter().enumerate() {
        let mut e = vec![0; k];
        e[i] = n;
        cols.push(e);
    }
    cols.extend(subgroup.iter().map(|g| g.coords.clone()));
    let snf = smith_normal_form(&IntMatrix::from_columns(&cols, k));
    // ascending from the decomposition; standard form wants descending
    let kept: Vec<usize> = (0..k)
        .filter(|&t| !snf.d.get(t, t).is_one())
        .rev()
        .collect();
    let factors = kept
        .iter()
        .map(|&t| snf.d.get(t, t).to_u64().expect("factor fits"))
        .collect();
    let rows: Vec<Vec<BigInt>> = kept.iter().map(|&t| snf.u.row(t).to_vec()).collect();
    let mut map = IntMatrix::zeros(kept.len(), k);
    for (r, row) in rows.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            map.set(r, c, x.clone());
        }
    }
    Ok((FiniteAbelianGroup::new(factors)?, map))
}

/// Pushes the torsion parts through `Γ -> Γ / Γ_0`.
pub fn downgrade_matrix(q: &DegreeMatrix, subgroup: &[GroupElement]) -> Result<DegreeMatrix> {
    let (target, map) = quotient_map(&q.gamma, subgroup)?;
    let eta = q
        .eta
        .iter()
        .map(|x| {
            let coords: Vec<BigInt> = x.coords.iter().map(|&c| BigInt::from(c)).collect();
            target.reduce_big(&map.mul_vec(&coords).expect("shapes agree"))
        })
        .collect();
    DegreeMatrix::new(q.constellation.clone(), target, eta)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Row bases of all lattices between `diag(p^a) Z^m` and `Z^m`, in upper
/// triangular Hermite form.
fn prime_power_sublattices(p: u64, exps: &[u32]) -> Vec<Vec<Vec<i64>>> {
    let m = exps.len();
    let mut out = Vec::new();
    let mut pivots = vec![0u32; m];
    loop {
        let h: Vec<i64> = pivots.iter().map(|&b| p.pow(b) as i64).collect();
        // free entries (i, j), i < j, each ranging over [0, h_j)
        let slots: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .filter(|&(_, j)| h[j] > 1)
            .collect();
        let mut values = vec![0i64; slots.len()];
        loop {
            let mut rows: Vec<Vec<i64>> = (0..m)
                .map(|i| {
                    let mut r = vec![0; m];
                    r[i] = h[i];
                    r
                })
                .collect();
            for (&(i, j), &v) in slots.iter().zip(&values) {
                rows[i][j] = v;
            }
            let contains_all = (0..m).all(|t| {
                let mut v = vec![0i64; m];
                v[t] = p.pow(exps[t]) as i64;
                triangular_contains(&rows, v)
            });
            if contains_all {
                out.push(rows);
            }
            if !advance(&mut values, |s| h[slots[s].1]) {
                break;
            }
        }
        if !advance_u32(&mut pivots, |i| exps[i] + 1) {
            break;
        }
    }
    out
}

fn triangular_contains(rows: &[Vec<i64>], mut v: Vec<i64>) -> bool {
    for i in 0..rows.len() {
        if v[i] % rows[i][i] != 0 {
            return false;
        }
        let f = v[i] / rows[i][i];
        for (x, r) in v.iter_mut().zip(&rows[i]) {
            *x -= f * r;
        }
    }
    true
}

/// Odometer step over `digits[s] in [0, bound(s))`; false after the last.
fn advance(digits: &mut [i64], bound: impl Fn(usize) -> i64) -> bool {
    for (s, digit) in digits.iter_mut().enumerate() {
        *digit += 1;
        if *digit < bound(s) {
            return true;
        }
        *digit = 0;
    }
    false
}

fn advance_u32(digits: &mut [u32], bound: impl Fn(usize) -> u32) -> bool {
    for (s, digit) in digits.iter_mut().enumerate() {
        *digit += 1;
        if *digit < bound(s) {
            return true;
        }
        *digit = 0;
    }
    false
}

/// One generating set per subgroup of `Z/a_1 x ... x Z/a_m`, assembled
/// from the subgroups of the primary components.
fn subgroup_generators(orders: &[u64]) -> Vec<Vec<Vec<i64>>> {
    let total: u64 = orders.iter().product();
    let mut combined: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
    for p in prime_factors(total) {
        let coords: Vec<usize> = (0..orders.len())
            .filter(|&t| orders[t].is_multiple_of(p))
            .collect();
        let exps: Vec<u32> = coords.iter().map(|&t| valuation(orders[t], p)).collect();
        let local: Vec<Vec<Vec<i64>>> = prime_power_sublattices(p, &exps)
            .into_iter()
            .map(|rows| {
                rows.into_iter()
                    .map(|r| {
                        let mut v = vec![0i64; orders.len()];
                        for (i, &t) in coords.iter().enumerate() {
                            let cofactor = (orders[t] / p.pow(exps[i])) as i64;
                            v[t] = (r[i] * cofactor).rem_euclid(orders[t] as i64);
                        }
                        v
                    })
                    .filter(|v| v.iter().any(|&x| x != 0))
                    .collect()
            })
            .collect();
        combined = combined
            .into_iter()
            .flat_map(|gens| {
                local.iter().map(move |extra| {
                    let mut g = gens.clone();
                    g.extend(extra.iter().cloned());
                    g
                })
            })
            .collect();
    }
    combined
}

/// `M = ker(w)` with a basis adapted to `H`: `H` is spanned by
/// `orders[t] * basis_t`.
struct QuotientFrame {
    basis: IntMatrix,
    orders: Vec<u64>,
}

fn quotient_frame(k: &WeightDegreeConstellation) -> Result<QuotientFrame> {
    let w = k.weights();
    let n = w.len();
    let kernel = kernel_lattice(&IntMatrix::from_rows(&[w.to_vec()]));
    let mut coefficient_cols = Vec::new();
    for l in exponent_tuple(k) {
        let e = l.exponents();
        for i in 1..n {
            let mut h = vec![BigInt::zero(); n];
            h[i] += e[i];
            h[0] -= e[0];
            let x = solve_diophantine(&kernel, &h)?.ok_or_else(|| Error::Invariant {
                family: k.to_string(),
                detail: "binomial relation outside ker(w)".into(),
            })?;
            coefficient_cols.push(x);
        }
    }
    let coefficients = IntMatrix::from_columns(&coefficient_cols, n - 1);
    let snf = smith_normal_form(&coefficients);
    let factors = snf.invariant_factors();
    if factors.len() != n - 1 {
        return Err(Error::Invariant {
            family: k.to_string(),
            detail: "binomial relations do not have full rank in ker(w)".into(),
        });
    }
    let orders = factors
        .iter()
        .map(|f| f.to_u64().expect("order fits"))
        .collect();
    let basis = kernel.mul(&unimodular_inverse(&snf.u)?)?;
    Ok(QuotientFrame { basis, orders })
}

/// A lattice `H <= L <= M` passing almost-freeness and the Gorenstein
/// condition, with `Γ = M / L`.
struct AdmissibleLattice {
    basis: IntMatrix,
    gamma: FiniteAbelianGroup,
}

fn admissible_lattices(k: &WeightDegreeConstellation) -> Result<Vec<AdmissibleLattice>> {
    let frame = quotient_frame(k)?;
    let n = k.weights().len();
    let r = n - 1;
    let splits: Vec<Vec<usize>> = index_subsets(n, k.d());
    let mut out = Vec::new();
    for gens in subgroup_generators(&frame.orders) {
        let mut local_cols: Vec<Vec<i64>> = (0..r)
            .map(|t| {
                let mut e = vec![0i64; r];
                e[t] = frame.orders[t] as i64;
                e
            })
            .collect();
        local_cols.extend(gens);
        let local = IntMatrix::from_columns(&local_cols, r);
        let factors: Vec<u64> = cokernel_structure(&local)
            .iter()
            .map(|f| f.to_u64().expect("finite quotient"))
            .collect();
        let gamma = FiniteAbelianGroup::new(factors)?;

        let spanning = frame.basis.mul(&local)?;
        let basis = hermite_normal_form(&spanning.transpose());
        if !lattice_almost_free(&basis) || !lattice_gorenstein(&basis, &splits) {
            continue;
        }
        out.push(AdmissibleLattice { basis, gamma });
    }
    Ok(out)
}

/// Every coordinate has gcd one over the lattice.
fn lattice_almost_free(basis: &IntMatrix) -> bool {
    (0..basis.cols()).all(|i| {
        (0..basis.rows())
            .fold(BigInt::zero(), |g, r| g.gcd(basis.get(r, i)))
            .is_one()
    })
}

/// The indicator vector of each `d`-subset `J` lies in the projection of
/// the lattice onto the coordinates `J`.
fn lattice_gorenstein(basis: &IntMatrix, splits: &[Vec<usize>]) -> bool {
    splits.iter().all(|j| {
        let rows: Vec<Vec<BigInt>> = j.iter().map(|&i| basis.column(i)).collect();
        let ones = vec![BigInt::one(); j.len()];
        matches!(
            solve_diophantine(&IntMatrix::from_rows(&rows), &ones),
            Ok(Some(_))
        )
    })
}

/// The projection `Z^n -> Z^n / L = Z x Γ` for a corank-one lattice `L`
/// given by a row basis: the free row (first nonzero entry positive), the
/// torsion group in standard form and the torsion part of each column.
pub fn projection_from_kernel(
    basis: &IntMatrix,
) -> Result<(Vec<BigInt>, FiniteAbelianGroup, Vec<GroupElement>)> {
    let n = basis.cols();
    let snf = smith_normal_form(&basis.transpose());
    let factors = snf.invariant_factors();
    if n == 0 || factors.len() != n - 1 {
        return Err(Error::InvalidDegreeMatrix(
            "lattice is not of corank one".into(),
        ));
    }
    let mut u = snf.u;
    let leading_negative = u
        .row(n - 1)
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    if leading_negative {
        for r in 0..n {
            for c in 0..n {
                let x = -u.get(r, c).clone();
                u.set(r, c, x);
            }
        }
    }
    let free_row = u.row(n - 1).to_vec();
    // ascending from the decomposition; standard form wants descending
    let torsion: Vec<usize> = (0..n - 1).filter(|&t| !factors[t].is_one()).rev().collect();
    let gamma = FiniteAbelianGroup::new(
        torsion
            .iter()
            .map(|&t| factors[t].to_u64().expect("factor fits"))
            .collect(),
    )?;
    let eta = (0..n)
        .map(|i| {
            let coords: Vec<BigInt> = torsion.iter().map(|&t| u.get(t, i).clone()).collect();
            gamma.reduce_big(&coords)
        })
        .collect();
    Ok((free_row, gamma, eta))
}

/// The degree matrix `Z^n -> Z^n / L` for a rank `n - 1` lattice inside
/// `ker(w)`, in standard form with free row `w`.
pub fn matrix_from_kernel(
    k: &WeightDegreeConstellation,
    basis: &IntMatrix,
) -> Result<DegreeMatrix> {
    let (free_row, gamma, eta) = projection_from_kernel(basis)?;
    let w: Vec<BigInt> = k.weights().iter().map(|&x| BigInt::from(x)).collect();
    if free_row != w {
        return Err(Error::InvalidDegreeMatrix(format!(
            "kernel projects onto {free_row:?}, not onto the weights"
        )));
    }
    DegreeMatrix::new(k.clone(), gamma, eta)
}

/// Index permutations preserving the (ascending) weights.
fn weight_preserving_permutations(weights: &[u64]) -> Vec<Vec<usize>> {
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    let mut start = 0;
    while start < weights.len() {
        let end = (start..weights.len())
            .find(|&i| weights[i] != weights[start])
            .unwrap_or(weights.len());
        let block = permutations(&(start..end).collect::<Vec<_>>());
        perms = perms
            .into_iter()
            .flat_map(|p| {
                block.iter().map(move |b| {
                    let mut q = p.clone();
                    q.extend(b);
                    q
                })
            })
            .collect();
        start = end;
    }
    perms
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn permute_columns(basis: &IntMatrix, perm: &[usize]) -> IntMatrix {
    let mut out = IntMatrix::zeros(basis.rows(), basis.cols());
    for r in 0..basis.rows() {
        for (c, &src) in perm.iter().enumerate() {
            out.set(r, c, basis.get(r, src).clone());
        }
    }
    hermite_normal_form(&out)
}

/// For each prime `p` dividing a relation degree, the largest `j` such
/// that a Gorenstein almost-free degree matrix in `Z x Z/p^j` exists.
/// The search stops at `j = 6` or once `p^j` exceeds the largest degree.
pub fn torsion_prime_bounds(k: &WeightDegreeConstellation) -> Result<BTreeMap<u64, u32>> {
    let lattices = admissible_lattices(k)?;
    Ok(prime_bounds_from(k, &lattices))
}

fn prime_bounds_from(
    k: &WeightDegreeConstellation,
    lattices: &[AdmissibleLattice],
) -> BTreeMap<u64, u32> {
    let max_mu = *k.degrees().iter().max().expect("at least one degree");
    let mut primes: Vec<u64> = k.degrees().iter().flat_map(|&m| prime_factors(m)).collect();
    primes.sort_unstable();
    primes.dedup();
    primes
        .into_iter()
        .map(|p| {
            let mut nu = 0;
            for j in 1..=6u32 {
                let order = p.pow(j);
                if order > max_mu {
                    break;
                }
                let exists = lattices.iter().any(|l| l.gamma.factors() == [order]);
                if !exists {
                    break;
                }
                nu = j;
            }
            (p, nu)
        })
        .collect()
}

/// Candidate torsion groups: at most `d + c - 1` invariant factors, each
/// dividing `prod p^{ν_p}`.
fn group_allowed(
    k: &WeightDegreeConstellation,
    bounds: &BTreeMap<u64, u32>,
    g: &FiniteAbelianGroup,
) -> bool {
    let bound: u64 = bounds.iter().map(|(&p, &nu)| p.pow(nu)).product();
    g.rank() < k.d() + k.c() && g.factors().iter().all(|&n| bound.is_multiple_of(n))
}

/// One class per isomorphism type of Gorenstein almost-free degree
/// matrices associated with `k`, sorted by canonical representative.
pub fn enumerate_degree_matrices(k: &WeightDegreeConstellation) -> Result<Vec<MatrixClass>> {
    enumerate_degree_matrices_with(k, true)
}

/// As [`enumerate_degree_matrices`]; `prime_bounds` toggles the candidate
/// group filter derived from [`torsion_prime_bounds`].
pub fn enumerate_degree_matrices_with(
    k: &WeightDegreeConstellation,
    prime_bounds: bool,
) -> Result<Vec<MatrixClass>> {
    let lattices = admissible_lattices(k)?;
    let bounds = prime_bounds_from(k, &lattices);
    let perms = weight_preserving_permutations(k.weights());
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let mut classes = Vec::new();
    for lattice in &lattices {
        if prime_bounds && !group_allowed(k, &bounds, &lattice.gamma) {
            continue;
        }
        if seen.contains(&lattice.basis) {
            continue;
        }
        for p in &perms {
            seen.insert(permute_columns(&lattice.basis, p));
        }
        let q = matrix_from_kernel(k, &lattice.basis)?;
        if q.gamma != lattice.gamma || !is_almost_free(&q) || !is_gorenstein_matrix(&q) {
            return Err(Error::Invariant {
                family: k.to_string(),
                detail: format!("lattice and matrix disagree for {:?}", q.torsion_rows()),
            });
        }
        classes.push(canonical_class(&q)?);
    }
    classes.sort();
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(w: &[u64], mu: &[u64]) -> WeightDegreeConstellation {
        WeightDegreeConstellation::from_parts(3, w, mu).unwrap()
    }

    fn group(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f.to_vec()).unwrap()
    }

    fn z2_matrix(w: &[u64], mu: &[u64], row: &[i64]) -> Result<DegreeMatrix> {
        DegreeMatrix::from_torsion_rows(k(w, mu), group(&[2]), &[row.to_vec()])
    }

    #[test]
    fn group_validation() {
        assert!(FiniteAbelianGroup::new(vec![4, 2]).is_ok());
        assert!(FiniteAbelianGroup::new(vec![2, 4]).is_err());
        assert!(FiniteAbelianGroup::new(vec![6, 4]).is_err());
        assert!(FiniteAbelianGroup::new(vec![1]).is_err());
        assert_eq!(FiniteAbelianGroup::trivial().order(), 1);
        assert_eq!(
            FiniteAbelianGroup::from_cyclic_orders(&[2, 3, 4])
                .unwrap()
                .factors(),
            &[12, 2]
        );
    }

    #[test]
    fn element_arithmetic() {
        let g = group(&[4, 2]);
        let a = g.element(&[3, 1]).unwrap();
        let b = g.element(&[-1, 3]).unwrap();
        assert_eq!(a, b);
        assert_eq!(g.add(&a, &a).coords(), &[2, 0]);
        assert_eq!(g.element_order(&a), 4);
        assert_eq!(g.elements().len(), 8);
        assert!(g.element(&[1]).is_err());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&group(&[2])).unwrap().len(), 1);
        assert_eq!(automorphisms(&group(&[4])).unwrap().len(), 2);
        assert_eq!(automorphisms(&group(&[2, 2])).unwrap().len(), 6);
        assert_eq!(automorphisms(&group(&[4, 2])).unwrap().len(), 8);
        assert_eq!(
            automorphisms(&FiniteAbelianGroup::trivial()).unwrap().len(),
            1
        );
        assert!(matches!(
            automorphisms_with_limit(&group(&[8, 8]), 32),
            Err(Error::GroupTooLarge {
                order: 64,
                limit: 32
            })
        ));
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(group(&[2, 2]).subgroups().len(), 5);
        assert_eq!(group(&[4]).subgroups().len(), 3);
        assert_eq!(group(&[6]).subgroups().len(), 4);
        assert_eq!(group(&[2, 2, 2]).subgroups().len(), 16);
        assert_eq!(group(&[4, 2]).subgroups().len(), 8);
        assert_eq!(FiniteAbelianGroup::trivial().subgroups().len(), 1);
    }

    #[test]
    fn homogeneity_is_enforced() {
        // l = (12, 6, 4, 2, 2); 2 * 1 != 12 * 0 fails only with odd multiples
        assert!(z2_matrix(&[1, 2, 3, 6, 6], &[12], &[0, 0, 1, 0, 1]).is_ok());
        assert!(z2_matrix(&[1, 1, 1, 1, 1], &[3], &[0, 0, 0, 0, 1]).is_err());
        assert!(z2_matrix(&[1, 1, 1, 1, 1], &[2], &[0, 0, 0, 0, 1]).is_ok());
    }

    #[test]
    fn gorenstein_examples() {
        let trivial = DegreeMatrix::trivial(k(&[1, 1, 1, 1, 1], &[4]));
        assert!(is_gorenstein_matrix(&trivial));
        let example = z2_matrix(&[1, 2, 3, 6, 6], &[12], &[0, 0, 1, 0, 1]).unwrap();
        assert!(is_gorenstein_matrix(&example));
        let bad = DegreeMatrix::trivial(k(&[1, 1, 2, 3, 3], &[6]));
        assert!(!is_gorenstein_matrix(&bad));
    }

    #[test]
    fn almost_free_examples() {
        assert!(is_almost_free(&DegreeMatrix::trivial(k(&[1; 5], &[2]))));
        let example = z2_matrix(&[1, 2, 3, 6, 6], &[12], &[0, 0, 1, 0, 1]).unwrap();
        assert!(is_almost_free(&example));
        let lone = z2_matrix(&[1; 5], &[2], &[0, 0, 0, 0, 1]).unwrap();
        assert!(!is_almost_free(&lone));
    }

    #[test]
    fn prime_bounds() {
        // the torsion family over (1,1,1,1,1) sits at degree 3, none at degree 2
        let b = torsion_prime_bounds(&k(&[1; 5], &[2])).unwrap();
        assert_eq!(b, BTreeMap::from([(2, 0)]));
        let b = torsion_prime_bounds(&k(&[1; 5], &[3])).unwrap();
        assert_eq!(b, BTreeMap::from([(3, 1)]));
        let b = torsion_prime_bounds(&k(&[1, 1, 1, 1, 2], &[4])).unwrap();
        assert_eq!(b, BTreeMap::from([(2, 2)]));
        let b = torsion_prime_bounds(&k(&[1, 2, 3, 6, 6], &[12])).unwrap();
        assert!(b.contains_key(&2));
    }

    #[test]
    fn canonical_form_trivial_group() {
        let q = DegreeMatrix::trivial(k(&[1, 2, 3, 6, 6], &[12]));
        assert_eq!(canonical_form(&q).unwrap(), q);
    }

    #[test]
    fn canonical_form_permutation() {
        let a = z2_matrix(&[1; 5], &[2], &[0, 1, 1, 0, 0]).unwrap();
        let b = z2_matrix(&[1; 5], &[2], &[1, 1, 0, 0, 0]).unwrap();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn downgrade_to_weights() {
        let q = z2_matrix(&[1, 2, 3, 6, 6], &[12], &[0, 0, 1, 0, 1]).unwrap();
        let gamma = q.gamma().clone();
        let all = downgrade_matrix(&q, &gamma.elements()).unwrap();
        assert!(all.gamma().is_trivial());
        assert_eq!(all.weights(), &[1, 2, 3, 6, 6]);
        let none = downgrade_matrix(&q, &[]).unwrap();
        assert_eq!(none, q);
        let foreign = group(&[4]).element(&[3]).unwrap();
        assert!(downgrade_matrix(&q, &[foreign]).is_err());
    }

    #[test]
    fn kernel_roundtrip() {
        let q = z2_matrix(&[1, 2, 3, 6, 6], &[12], &[0, 0, 1, 0, 1]).unwrap();
        let back = matrix_from_kernel(q.constellation(), &q.kernel()).unwrap();
        assert_eq!(canonical_form(&back).unwrap(), canonical_form(&q).unwrap());
    }
}
