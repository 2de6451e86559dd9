//! Generator matrices, the simplices attached to degree data, lattice-point
//! counting and the anticanonical invariants.
//!
//! A simplex here is always cut out by `n + 1` half-spaces
//! `<v_i, x> >= -b_i` whose normals `v_i` are the columns of a generator
//! matrix. Since the columns positively span, every such region is bounded,
//! and simplices sharing the normals add by adding their shifts.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::constellations::exponent_tuple;
use crate::error::{Error, Result};
use crate::torsion::{
    downgrade_matrix, is_almost_free, matrix_from_kernel, projection_from_kernel, DegreeMatrix,
    FiniteAbelianGroup, GroupElement,
};
use crate::zlattice::{gcd_all, kernel_lattice, solve_diophantine, IntMatrix};

/// An `n x (n + 1)` integer matrix whose columns are pairwise distinct
/// primitive vectors positively spanning `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    p: IntMatrix,
}

impl GeneratorMatrix {
    pub fn new(p: IntMatrix) -> Result<Self> {
        let n = p.rows();
        if p.cols() != n + 1 {
            return Err(Error::Dimension(format!(
                "generator matrix must be n x (n+1), got {}x{}",
                p.rows(),
                p.cols()
            )));
        }
        let cols = p.columns();
        for (i, v) in cols.iter().enumerate() {
            if !gcd_all(v).is_one() {
                return Err(Error::InvalidDegreeMatrix(format!(
                    "column {i} is not primitive"
                )));
            }
            if cols[..i].contains(v) {
                return Err(Error::InvalidDegreeMatrix(format!("column {i} repeats")));
            }
        }
        if positive_relation(&p).is_none() {
            return Err(Error::InvalidDegreeMatrix(
                "columns do not positively span".into(),
            ));
        }
        Ok(GeneratorMatrix { p })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        GeneratorMatrix::new(IntMatrix::from_rows(rows))
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.p
    }

    /// `P*`, the transpose.
    pub fn dual(&self) -> IntMatrix {
        self.p.transpose()
    }

    /// The rays as `i64` vectors.
    pub fn rays(&self) -> Vec<Vec<i64>> {
        self.p
            .columns()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| x.to_i64().expect("ray fits i64"))
                    .collect()
            })
            .collect()
    }

    /// The primitive positive relation `w` with `P w = 0`.
    pub fn weights(&self) -> Vec<BigInt> {
        positive_relation(&self.p).expect("validated on construction")
    }

    /// The projection `Z^{n+1} -> Z^{n+1} / im(P*) = Z x Γ`.
    pub fn degree_map(&self) -> Result<(Vec<BigInt>, FiniteAbelianGroup, Vec<GroupElement>)> {
        projection_from_kernel(&self.p)
    }
}

/// The kernel generator of `p` if it has rank one and can be chosen
/// strictly positive.
fn positive_relation(p: &IntMatrix) -> Option<Vec<BigInt>> {
    let ker = kernel_lattice(p);
    if ker.cols() != 1 {
        return None;
    }
    let mut w = ker.column(0);
    if w.first().is_some_and(|x| x.is_negative()) {
        w.iter_mut().for_each(|x| *x = -x.clone());
    }
    w.iter().all(|x| x.is_positive()).then_some(w)
}

/// An element `(z, t)` of `Z x Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassElement {
    pub z: i64,
    pub torsion: GroupElement,
}

/// The region `<v_i, x> >= -b_i`, `i = 1..n+1`, with exact vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSimplex {
    normals: Vec<Vec<i64>>,
    shifts: Vec<i64>,
    vertices: Vec<Vec<BigRational>>,
}

impl LatticeSimplex {
    /// The normals must positively span `Q^n`; the region may still be
    /// empty or a single point.
    pub fn new(normals: Vec<Vec<i64>>, shifts: Vec<i64>) -> Result<Self> {
        let n = normals.len().saturating_sub(1);
        if normals.is_empty() || normals.iter().any(|v| v.len() != n) || shifts.len() != n + 1 {
            return Err(Error::Dimension(format!(
                "expected {} normals of length {n} and as many shifts",
                n + 1
            )));
        }
        let p = IntMatrix::from_columns(&normals, n);
        if positive_relation(&p).is_none() {
            return Err(Error::InvalidDegreeMatrix(
                "normals do not positively span".into(),
            ));
        }
        let vertices = (0..=n)
            .map(|k| {
                let rows: Vec<Vec<BigRational>> = (0..=n)
                    .filter(|&i| i != k)
                    .map(|i| normals[i].iter().map(|&x| rat(x)).collect())
                    .collect();
                let rhs: Vec<BigRational> = (0..=n)
                    .filter(|&i| i != k)
                    .map(|i| rat(-shifts[i]))
                    .collect();
                solve_rational(rows, rhs).expect("n of n + 1 spanning normals are independent")
            })
            .collect();
        Ok(LatticeSimplex {
            normals,
            shifts,
            vertices,
        })
    }

    /// The simplex of `p` with shifts `b`.
    pub fn with_rays(p: &GeneratorMatrix, shifts: Vec<i64>) -> Result<Self> {
        LatticeSimplex::new(p.rays(), shifts)
    }

    pub fn n(&self) -> usize {
        self.shifts.len() - 1
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    /// Vertex `k` solves every equation but the `k`-th.
    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    /// `<v_0, x_0> + b_0` as a sign for the region: negative when empty,
    /// zero when a point.
    fn slack(&self) -> BigRational {
        dot_rat(&self.normals[0], &self.vertices[0]) + rat(self.shifts[0])
    }

    pub fn is_empty(&self) -> bool {
        self.slack().is_negative()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.slack().is_positive()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.normals
            .iter()
            .zip(&self.shifts)
            .all(|(v, &b)| dot(v, x) >= -b)
    }

    /// Integer bounding box `[lo, hi]` per coordinate, `None` when empty.
    pub fn bounding_box(&self) -> Option<Vec<(i64, i64)>> {
        if self.is_empty() {
            return None;
        }
        Some(
            (0..self.n())
                .map(|t| {
                    let lo = self
                        .vertices
                        .iter()
                        .map(|v| &v[t])
                        .min()
                        .expect("vertices exist");
                    let hi = self
                        .vertices
                        .iter()
                        .map(|v| &v[t])
                        .max()
                        .expect("vertices exist");
                    (
                        lo.ceil().to_integer().to_i64().expect("box fits i64"),
                        hi.floor().to_integer().to_i64().expect("box fits i64"),
                    )
                })
                .collect(),
        )
    }

    /// The vertex set as a Laurent support when all vertices are integral.
    pub fn vertex_support(&self) -> Option<LaurentSupport> {
        let exps: Option<BTreeSet<Vec<i64>>> = self
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| x.is_integer().then(|| x.to_integer().to_i64()).flatten())
                    .collect()
            })
            .collect();
        LaurentSupport::new(self.n(), exps?).ok()
    }

    /// Inward primitive facet normals recomputed from the vertices, or
    /// `None` if the vertices are affinely dependent.
    pub fn facet_normals(&self) -> Option<Vec<Vec<i64>>> {
        let n = self.n();
        (0..=n)
            .map(|k| {
                let others: Vec<usize> = (0..=n).filter(|&i| i != k).collect();
                let base = &self.vertices[others[0]];
                let diffs: Vec<Vec<BigRational>> = others[1..]
                    .iter()
                    .map(|&i| sub_rat(&self.vertices[i], base))
                    .collect();
                let rows: Vec<Vec<BigInt>> = diffs.iter().map(|d| clear_denominators(d)).collect();
                let m = if rows.is_empty() {
                    IntMatrix::zeros(0, n)
                } else {
                    IntMatrix::from_rows(&rows)
                };
                let ker = kernel_lattice(&m);
                if ker.cols() != 1 {
                    return None;
                }
                let mut u: Vec<i64> = ker
                    .column(0)
                    .iter()
                    .map(|x| x.to_i64())
                    .collect::<Option<_>>()?;
                let side = dot_rat(&u, &sub_rat(&self.vertices[k], base));
                if side.is_zero() {
                    return None;
                }
                if side.is_negative() {
                    u.iter_mut().for_each(|x| *x = -*x);
                }
                Some(u)
            })
            .collect()
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn dot(v: &[i64], x: &[i64]) -> i64 {
    v.iter().zip(x).map(|(a, b)| a * b).sum()
}

fn dot_rat(v: &[i64], x: &[BigRational]) -> BigRational {
    v.iter().zip(x).map(|(&a, b)| b * rat(a)).sum()
}

fn sub_rat(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

/// Gaussian elimination over `Q` for a square system.
fn solve_rational(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * y;
                }
                let x = &f * &b[col];
                b[r] -= x;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Exponent set of a Laurent polynomial, coefficients forgotten.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSupport {
    n: usize,
    exponents: BTreeSet<Vec<i64>>,
}

impl LaurentSupport {
    pub fn new(n: usize, exponents: BTreeSet<Vec<i64>>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::Dimension("empty Laurent support".into()));
        }
        if exponents.iter().any(|e| e.len() != n) {
            return Err(Error::Dimension(format!("exponents must have length {n}")));
        }
        Ok(LaurentSupport { n, exponents })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn exponents(&self) -> &BTreeSet<Vec<i64>> {
        &self.exponents
    }
}

/// A `P`-homogenized polynomial: its exponents and its degree in the
/// projection attached to `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogenization {
    pub exponents: BTreeSet<Vec<i64>>,
    pub gamma: FiniteAbelianGroup,
    pub degree: ClassElement,
}

/// A basis of `ker(Q)` as a generator matrix, columns aligned with `q`.
pub fn generator_matrix(q: &DegreeMatrix) -> Result<GeneratorMatrix> {
    if !is_almost_free(q) {
        return Err(Error::InvalidDegreeMatrix(format!(
            "{} with torsion {:?} is not almost free",
            q.constellation(),
            q.gamma().factors()
        )));
    }
    GeneratorMatrix::new(q.kernel())
}

/// The degree matrix `Z^n -> Z^n / im(P*)` in standard form, the inverse
/// of [`generator_matrix`] up to isomorphism.
pub fn degree_matrix_of(q: &DegreeMatrix, p: &GeneratorMatrix) -> Result<DegreeMatrix> {
    matrix_from_kernel(q.constellation(), p.matrix())
}

/// The simplices `B_j`: `<v_1, x> >= -l_{j,1}` and `<v_i, x> >= 0` otherwise.
pub fn relation_polytopes(q: &DegreeMatrix, p: &GeneratorMatrix) -> Result<Vec<LatticeSimplex>> {
    if p.n() + 1 != q.len() {
        return Err(Error::Dimension(format!(
            "{} rays for {} degree columns",
            p.n() + 1,
            q.len()
        )));
    }
    exponent_tuple(q.constellation())
        .iter()
        .map(|l| {
            let mut shifts = vec![0; q.len()];
            shifts[0] = l.exponents()[0] as i64;
            let s = LatticeSimplex::with_rays(p, shifts)?;
            if !s.is_full_dimensional() {
                return Err(Error::InvalidDegreeMatrix(format!(
                    "relation polytope of degree {} is not full-dimensional",
                    l.degree()
                )));
            }
            Ok(s)
        })
        .collect()
}

/// Exact number of integer points in `s`.
///
/// Sweeps the bounding box in all but the last coordinate and counts the
/// last one as an interval.
pub fn count_lattice_points(s: &LatticeSimplex) -> u64 {
    let Some(bbox) = s.bounding_box() else {
        return 0;
    };
    let n = s.n();
    if bbox.iter().any(|(lo, hi)| lo > hi) {
        return 0;
    }
    let last = n - 1;
    let mut x: Vec<i64> = bbox.iter().map(|&(lo, _)| lo).collect();
    let mut total = 0u64;
    loop {
        let (mut lo, mut hi) = bbox[last];
        let mut feasible = true;
        for (v, &b) in s.normals.iter().zip(&s.shifts) {
            // v_last * x_last >= -b - <v', x'>
            let rest: i64 = (0..last).map(|t| v[t] * x[t]).sum();
            let rhs = -b - rest;
            let a = v[last];
            match a.signum() {
                1 => lo = lo.max(Integer::div_ceil(&rhs, &a)),
                -1 => hi = hi.min(Integer::div_floor(&rhs, &a)),
                _ => feasible &= rhs <= 0,
            }
        }
        if feasible && lo <= hi {
            total += (hi - lo + 1) as u64;
        }
        let mut t = 0;
        loop {
            if t == last {
                return total;
            }
            if x[t] < bbox[t].1 {
                x[t] += 1;
                break;
            }
            x[t] = bbox[t].0;
            t += 1;
        }
    }
}

/// Whether the Minkowski sum of the simplices has exactly the columns of
/// `p` as its facet normals, each supporting a facet.
///
/// Facet normals are recomputed from the vertices of every summand; when
/// all summands are full-dimensional with the same normals, the sum is the
/// simplex with the added shifts.
pub fn verify_normal_fan(s_list: &[LatticeSimplex], p: &GeneratorMatrix) -> bool {
    if s_list.is_empty() {
        return false;
    }
    let rays = p.rays();
    let expected: BTreeSet<&Vec<i64>> = rays.iter().collect();
    let mut total = vec![0i64; rays.len()];
    for s in s_list {
        if s.n() != p.n() || !s.is_full_dimensional() {
            return false;
        }
        let Some(found) = s.facet_normals() else {
            return false;
        };
        if found.iter().collect::<BTreeSet<_>>() != expected {
            return false;
        }
        for (v, &b) in s.normals.iter().zip(&s.shifts) {
            let Some(i) = rays.iter().position(|r| r == v) else {
                return false;
            };
            total[i] += b;
        }
    }
    LatticeSimplex::new(rays, total).is_ok_and(|sum| sum.is_full_dimensional())
}

/// Pulls the exponents back through `P*` and divides out the largest
/// common monomial.
pub fn homogenize(f: &LaurentSupport, p: &GeneratorMatrix) -> Result<Homogenization> {
    if f.n() != p.n() {
        return Err(Error::Dimension(format!(
            "support in {} variables for a rank {} generator matrix",
            f.n(),
            p.n()
        )));
    }
    let rays = p.rays();
    let pulled: Vec<Vec<i64>> = f
        .exponents()
        .iter()
        .map(|nu| rays.iter().map(|v| dot(v, nu)).collect())
        .collect();
    let mins: Vec<i64> = (0..rays.len())
        .map(|i| {
            pulled
                .iter()
                .map(|e| e[i])
                .min()
                .expect("support is nonempty")
        })
        .collect();
    let exponents: BTreeSet<Vec<i64>> = pulled
        .iter()
        .map(|e| e.iter().zip(&mins).map(|(a, m)| a - m).collect())
        .collect();
    let (free, gamma, eta) = p.degree_map()?;
    let e = exponents.iter().next().expect("support is nonempty");
    let z: BigInt = free.iter().zip(e).map(|(w, &x)| w * x).sum();
    let torsion = combine(&gamma, &eta, e);
    Ok(Homogenization {
        exponents,
        degree: ClassElement {
            z: z.to_i64().expect("degree fits i64"),
            torsion,
        },
        gamma,
    })
}

fn combine(gamma: &FiniteAbelianGroup, eta: &[GroupElement], coeffs: &[i64]) -> GroupElement {
    eta.iter().zip(coeffs).fold(gamma.zero(), |acc, (x, &c)| {
        gamma.add(&acc, &gamma.scale(x, c))
    })
}

/// Degree `(mu_j, l_{j,1} η_1)` of the `j`-th relation.
pub fn relation_degrees(q: &DegreeMatrix) -> Vec<ClassElement> {
    exponent_tuple(q.constellation())
        .iter()
        .map(|l| ClassElement {
            z: l.degree() as i64,
            torsion: q.gamma().scale(&q.eta()[0], l.exponents()[0] as i64),
        })
        .collect()
}

/// `-K = sum q_i - sum deg g_j`.
pub fn anticanonical_class(q: &DegreeMatrix) -> ClassElement {
    let g = q.gamma();
    let mut z: i64 = q.weights().iter().map(|&w| w as i64).sum();
    let mut torsion = q.eta().iter().fold(g.zero(), |acc, x| g.add(&acc, x));
    for r in relation_degrees(q) {
        z -= r.z;
        torsion = g.add(&torsion, &g.scale(&r.torsion, -1));
    }
    ClassElement { z, torsion }
}

/// `(-K)^d = mu_1 ... mu_c k^d / (w_1 ... w_n |Γ|)`.
pub fn anticanonical_selfintersection(q: &DegreeMatrix) -> BigRational {
    let k = BigInt::from(anticanonical_class(q).z);
    let d = q.constellation().d() as u32;
    let mu: BigInt = q
        .constellation()
        .degrees()
        .iter()
        .map(|&m| BigInt::from(m))
        .product();
    let w: BigInt = q.weights().iter().map(|&x| BigInt::from(x)).product();
    BigRational::new(mu * k.pow(d), w * BigInt::from(q.gamma().order()))
}

/// `B(-K)` and the `C_j`, whose lattice points are the monomials of
/// degree `-K` and `-K - deg g_j`.
pub fn anticanonical_polytopes(
    q: &DegreeMatrix,
    p: &GeneratorMatrix,
) -> Result<(LatticeSimplex, Vec<LatticeSimplex>)> {
    let ls: Vec<i64> = exponent_tuple(q.constellation())
        .iter()
        .map(|l| l.exponents()[0] as i64)
        .collect();
    let mut e_x = vec![1i64; q.len()];
    e_x[0] -= ls.iter().sum::<i64>();
    let b = LatticeSimplex::with_rays(p, e_x.clone())?;
    let cs = ls
        .iter()
        .map(|&l| {
            let mut shifts = e_x.clone();
            shifts[0] -= l;
            LatticeSimplex::with_rays(p, shifts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((b, cs))
}

/// `max(s(-K) - s_1 - ... - s_c, 0)` from the lattice-point counts.
pub fn h0_anticanonical(q: &DegreeMatrix, p: &GeneratorMatrix) -> Result<u64> {
    let (b, cs) = anticanonical_polytopes(q, p)?;
    let s = count_lattice_points(&b) as i64;
    let corr: i64 = cs.iter().map(|c| count_lattice_points(c) as i64).sum();
    Ok((s - corr).max(0) as u64)
}

/// Number of monomials `T^y`, `y >= 0`, with `Q(y) = (z, t)`.
pub fn count_monomials(q: &DegreeMatrix, target: &ClassElement) -> u64 {
    fn rec(
        i: usize,
        left: i64,
        acc: &GroupElement,
        q: &DegreeMatrix,
        target: &GroupElement,
    ) -> u64 {
        let w = q.weights();
        if i == w.len() {
            return u64::from(left == 0 && acc == target);
        }
        let g = q.gamma();
        let mut total = 0;
        let mut cur = acc.clone();
        let mut y = 0;
        while y * w[i] as i64 <= left {
            total += rec(i + 1, left - y * w[i] as i64, &cur, q, target);
            cur = g.add(&cur, &q.eta()[i]);
            y += 1;
        }
        total
    }
    if target.z < 0 {
        return 0;
    }
    rec(0, target.z, &q.gamma().zero(), q, &target.torsion)
}

/// `h^0(-K)` by counting monomials of degree `-K` and subtracting the
/// multiples of each relation.
pub fn h0_by_monomials(q: &DegreeMatrix) -> u64 {
    let g = q.gamma();
    let k = anticanonical_class(q);
    let s = count_monomials(q, &k) as i64;
    let corr: i64 = relation_degrees(q)
        .iter()
        .map(|r| {
            let t = ClassElement {
                z: k.z - r.z,
                torsion: g.add(&k.torsion, &g.scale(&r.torsion, -1)),
            };
            count_monomials(q, &t) as i64
        })
        .sum();
    (s - corr).max(0) as u64
}

/// The unique integer `A` with `P~* A = P*`.
pub fn transport_matrix(p: &GeneratorMatrix, p_tilde: &GeneratorMatrix) -> Result<IntMatrix> {
    let lhs = p_tilde.dual();
    let rhs = p.dual();
    let n = p.n();
    if p_tilde.n() != n {
        return Err(Error::Dimension(
            "generator matrices of different rank".into(),
        ));
    }
    let mut a = IntMatrix::zeros(n, n);
    for j in 0..n {
        let col = solve_diophantine(&lhs, &rhs.column(j))?.ok_or_else(|| {
            Error::InvalidDegreeMatrix(format!("column {j} of P* is not in the image of P~*"))
        })?;
        for (i, x) in col.into_iter().enumerate() {
            a.set(i, j, x);
        }
    }
    Ok(a)
}

/// A downgraded degree matrix with its geometry.
#[derive(Clone, Debug)]
pub struct DowngradedGeometry {
    pub q_tilde: DegreeMatrix,
    pub p: GeneratorMatrix,
    pub p_tilde: GeneratorMatrix,
    pub a: IntMatrix,
    /// The simplices `A B_j`.
    pub polytopes: Vec<LatticeSimplex>,
}

/// Downgrades `q` along `Γ -> Γ / Γ_0` and transports the `B_j`.
pub fn downgrade_geometry(
    q: &DegreeMatrix,
    subgroup: &[GroupElement],
) -> Result<DowngradedGeometry> {
    let q_tilde = downgrade_matrix(q, subgroup)?;
    let p = generator_matrix(q)?;
    let p_tilde = generator_matrix(&q_tilde)?;
    let a = transport_matrix(&p, &p_tilde)?;
    let polytopes = relation_polytopes(q, &p)?
        .iter()
        .map(|b| transport_simplex(b, &p_tilde))
        .collect::<Result<Vec<_>>>()?;
    Ok(DowngradedGeometry {
        q_tilde,
        p,
        p_tilde,
        a,
        polytopes,
    })
}

/// `A B` for `P~* A = P*`: the same shifts against the rays of `P~`.
pub fn transport_simplex(s: &LatticeSimplex, p_tilde: &GeneratorMatrix) -> Result<LatticeSimplex> {
    LatticeSimplex::with_rays(p_tilde, s.shifts.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellations::WeightDegreeConstellation;

    fn family(w: &[u64], mu: &[u64]) -> WeightDegreeConstellation {
        WeightDegreeConstellation::from_parts(3, w, mu).unwrap()
    }

    fn standard_simplex(n: usize, k: i64) -> LatticeSimplex {
        let mut normals: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        normals.push(vec![-1; n]);
        let mut shifts = vec![0; n];
        shifts.push(k);
        LatticeSimplex::new(normals, shifts).unwrap()
    }

    #[test]
    fn standard_simplex_counts() {
        assert_eq!(count_lattice_points(&standard_simplex(4, 4)), 70);
        assert_eq!(count_lattice_points(&standard_simplex(2, 3)), 10);
        assert_eq!(count_lattice_points(&standard_simplex(1, 5)), 6);
    }

    #[test]
    fn empty_and_point_regions() {
        let s = standard_simplex(3, -1);
        assert!(s.is_empty());
        assert_eq!(count_lattice_points(&s), 0);
        let s = standard_simplex(3, 0);
        assert!(!s.is_empty() && !s.is_full_dimensional());
        assert_eq!(count_lattice_points(&s), 1);
    }

    #[test]
    fn generator_matrix_validation() {
        assert!(GeneratorMatrix::from_rows(&[vec![1, 0, -1], vec![0, 1, -1]]).is_ok());
        assert!(GeneratorMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).is_err());
        assert!(GeneratorMatrix::from_rows(&[vec![2, 0, -1], vec![0, 1, -1]]).is_err());
        assert!(GeneratorMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn projective_space_generator() {
        let q = DegreeMatrix::trivial(family(&[1, 1, 1, 1, 1], &[4]));
        let p = generator_matrix(&q).unwrap();
        assert_eq!(p.weights(), vec![BigInt::one(); 5]);
        let (free, gamma, _) = p.degree_map().unwrap();
        assert!(gamma.is_trivial());
        assert_eq!(free, vec![BigInt::one(); 5]);
        assert_eq!(degree_matrix_of(&q, &p).unwrap(), q);
    }

    #[test]
    fn weighted_projective_roundtrip() {
        let q = DegreeMatrix::trivial(family(&[1, 1, 1, 1, 3], &[6]));
        let p = generator_matrix(&q).unwrap();
        assert_eq!(degree_matrix_of(&q, &p).unwrap(), q);
        let w: Vec<i64> = p.weights().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(w, vec![1, 1, 1, 1, 3]);
    }

    #[test]
    fn anticanonical_data() {
        let quartic = DegreeMatrix::trivial(family(&[1, 1, 1, 1, 1], &[4]));
        assert_eq!(anticanonical_class(&quartic).z, 1);
        assert_eq!(anticanonical_selfintersection(&quartic), rat(4));
        let p = generator_matrix(&quartic).unwrap();
        assert_eq!(h0_anticanonical(&quartic, &p).unwrap(), 5);

        let double = DegreeMatrix::trivial(family(&[1, 1, 1, 1, 3], &[6]));
        assert_eq!(anticanonical_selfintersection(&double), rat(2));
        let p = generator_matrix(&double).unwrap();
        assert_eq!(anticanonical_class(&double).z, 1);
        assert_eq!(h0_anticanonical(&double, &p).unwrap(), 4);
        assert_eq!(h0_by_monomials(&double), 4);

        let two = DegreeMatrix::trivial(family(&[1, 1, 1, 1, 1, 1], &[2, 2]));
        let p = generator_matrix(&two).unwrap();
        assert_eq!(h0_anticanonical(&two, &p).unwrap(), 19);
        assert_eq!(h0_by_monomials(&two), 19);

        let three = DegreeMatrix::trivial(family(&[1; 7], &[2, 2, 2]));
        assert_eq!(anticanonical_class(&three).z, 1);
    }

    #[test]
    fn homogenize_line() {
        let p = GeneratorMatrix::from_rows(&[vec![1, -1]]).unwrap();
        let f = LaurentSupport::new(1, [vec![0], vec![1]].into_iter().collect()).unwrap();
        let h = homogenize(&f, &p).unwrap();
        let expected: BTreeSet<Vec<i64>> = [vec![1, 0], vec![0, 1]].into_iter().collect();
        assert_eq!(h.exponents, expected);
        assert_eq!(h.degree.z, 1);
    }

    #[test]
    fn homogenize_monomial() {
        let p = GeneratorMatrix::from_rows(&[vec![1, 0, -1], vec![0, 1, -1]]).unwrap();
        let f = LaurentSupport::new(2, [vec![3, -2]].into_iter().collect()).unwrap();
        let h = homogenize(&f, &p).unwrap();
        assert_eq!(h.exponents, [vec![0, 0, 0]].into_iter().collect());
        assert_eq!(h.degree.z, 0);
    }

    #[test]
    fn facet_normals_of_standard_simplex() {
        let s = standard_simplex(3, 2);
        let mut found = s.facet_normals().unwrap();
        found.sort();
        let mut expected = s.normals().to_vec();
        expected.sort();
        assert_eq!(found, expected);
    }

    #[test]
    fn rational_solver() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        let x = solve_rational(a, vec![rat(1), rat(2)]).unwrap();
        assert_eq!(
            x,
            vec![
                BigRational::new(1.into(), 5.into()),
                BigRational::new(3.into(), 5.into())
            ]
        );
        assert!(solve_rational(
            vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]],
            vec![rat(0), rat(0)]
        )
        .is_none());
    }
}
