//! Classification runs: constellations, degree matrices and invariants
//! assembled into records, plus the worked-example fixtures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::constellations::{
    enumerate_constellations_with, is_fano, SearchOptions, WeightDegreeConstellation,
    DEFAULT_CUTOFF, DIMENSION,
};
use crate::error::{Error, Result};
use crate::geometry::{
    anticanonical_class, anticanonical_selfintersection, count_lattice_points, downgrade_geometry,
    generator_matrix, h0_anticanonical, h0_by_monomials, homogenize, relation_polytopes,
    transport_matrix, transport_simplex, verify_normal_fan, ClassElement, GeneratorMatrix,
    LatticeSimplex, LaurentSupport,
};
use crate::torsion::{
    canonical_form, enumerate_degree_matrices, is_almost_free, is_gorenstein_matrix,
    matrix_from_kernel, DegreeMatrix, FiniteAbelianGroup,
};
use crate::zlattice::{cokernel_structure, IntMatrix};

/// One classified family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub id: String,
    pub constellation: WeightDegreeConstellation,
    pub matrix: DegreeMatrix,
    pub antican_class: ClassElement,
    pub antican_cube: u64,
    pub h0: u64,
}

/// Counts of a classification run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub per_type: BTreeMap<usize, usize>,
    pub per_weights: BTreeMap<String, usize>,
    pub total: usize,
}

impl RunSummary {
    fn from_records(records: &[ClassificationRecord]) -> Self {
        let mut s = RunSummary::default();
        for r in records {
            *s.per_type.entry(r.constellation.c()).or_default() += 1;
            *s.per_weights
                .entry(weight_code(r.constellation.weights()).unwrap_or_default())
                .or_default() += 1;
            s.total += 1;
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Largest first tail entry tried by the constellation sweep.
    pub cutoff: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            cutoff: DEFAULT_CUTOFF,
        }
    }
}

type Family = (
    WeightDegreeConstellation,
    DegreeMatrix,
    ClassElement,
    u64,
    u64,
);

pub fn classify(
    d: usize,
    c_set: &BTreeSet<usize>,
) -> Result<(Vec<ClassificationRecord>, RunSummary)> {
    classify_with(d, c_set, ClassifyOptions::default())
}

/// Classifies all families of type `(d, c)` for `c` in `c_set`, sorted by
/// codimension, weights, degrees, torsion and canonical matrix.
pub fn classify_with(
    d: usize,
    c_set: &BTreeSet<usize>,
    options: ClassifyOptions,
) -> Result<(Vec<ClassificationRecord>, RunSummary)> {
    let search = SearchOptions {
        cutoff: options.cutoff,
        ..SearchOptions::default()
    };
    let mut constellations = Vec::new();
    for &c in c_set {
        constellations.extend(enumerate_constellations_with(d, c, search)?);
    }
    let families: Vec<Vec<Family>> = constellations
        .par_iter()
        .map(|k| {
            enumerate_degree_matrices(k)?
                .into_iter()
                .map(|class| {
                    let q = class.representative;
                    let (anti, cube, h0) = invariants(&q)?;
                    Ok((k.clone(), q, anti, cube, h0))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<_> = families.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        let key = |r: &(
            WeightDegreeConstellation,
            DegreeMatrix,
            ClassElement,
            u64,
            u64,
        )| {
            (
                r.0.c(),
                r.0.weights().to_vec(),
                r.0.degrees().to_vec(),
                r.1.gamma().factors().to_vec(),
            )
        };
        key(a).cmp(&key(b)).then_with(|| a.1.cmp(&b.1))
    });
    let mut buckets: BTreeMap<(Vec<u64>, Vec<u64>), usize> = BTreeMap::new();
    let mut records = Vec::with_capacity(rows.len());
    for (k, q, anti, cube, h0) in rows {
        let factors = q.gamma().factors().to_vec();
        let index = buckets
            .entry((k.weights().to_vec(), factors.clone()))
            .or_default();
        *index += 1;
        records.push(ClassificationRecord {
            id: assign_id(k.weights(), &factors, *index)?,
            constellation: k,
            matrix: q,
            antican_class: anti,
            antican_cube: cube,
            h0,
        });
    }
    let summary = RunSummary::from_records(&records);
    Ok((records, summary))
}

/// `-K`, `-K^3` and `h^0(-K)`, checking the normal fan, the generator
/// roundtrip and integrality along the way.
pub fn invariants(q: &DegreeMatrix) -> Result<(ClassElement, u64, u64)> {
    let family = family_name(q);
    let fail = |detail: String| Error::Invariant {
        family: family.clone(),
        detail,
    };
    let p = generator_matrix(q)?;
    let back = canonical_form(&matrix_from_kernel(q.constellation(), p.matrix())?)?;
    if back != canonical_form(q)? {
        return Err(fail(
            "generator matrix does not reproduce the degree matrix".into(),
        ));
    }
    if !verify_normal_fan(&relation_polytopes(q, &p)?, &p) {
        return Err(fail("relation polytopes do not have the fan of P".into()));
    }
    let anti = anticanonical_class(q);
    if anti.z <= 0 {
        return Err(fail(format!(
            "anticanonical degree {} is not positive",
            anti.z
        )));
    }
    let cube = anticanonical_selfintersection(q);
    if !cube.is_integer() || !cube.is_positive() {
        return Err(fail(format!("-K^3 = {cube} is not a positive integer")));
    }
    let h0 = h0_anticanonical(q, &p)?;
    Ok((anti, cube.to_integer().to_u64().expect("cube fits u64"), h0))
}

fn family_name(q: &DegreeMatrix) -> String {
    format!(
        "{} torsion {:?} eta {:?}",
        q.constellation(),
        q.gamma().factors(),
        q.torsion_rows()
    )
}

/// The full property suite for one record; returns the failed checks.
pub fn check_record(r: &ClassificationRecord) -> Vec<String> {
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            failures.push(format!("{}: {what}", r.id));
        }
    };
    let q = &r.matrix;
    match invariants(q) {
        Ok((anti, cube, h0)) => {
            check(
                anti == r.antican_class,
                "anticanonical class differs on recomputation".into(),
            );
            check(
                cube == r.antican_cube,
                "-K^3 differs on recomputation".into(),
            );
            check(h0 == r.h0, "h0 differs on recomputation".into());
        }
        Err(e) => check(false, e.to_string()),
    }
    let k = q.constellation();
    let expected_z =
        k.weights().iter().sum::<u64>() as i64 - k.degrees().iter().sum::<u64>() as i64;
    check(
        r.antican_class.z == expected_z && expected_z > 0,
        "-K degree is not sum w - sum mu > 0".into(),
    );
    let oracle = h0_by_monomials(q);
    check(
        oracle == r.h0,
        format!("h0 {} against monomial count {oracle}", r.h0),
    );

    match generator_matrix(q).and_then(|p| Ok((relation_polytopes(q, &p)?, p))) {
        Ok((bs, p)) => {
            for (j, b) in bs.iter().enumerate() {
                let pure = b
                    .vertex_support()
                    .and_then(|f| homogenize(&f, &p).ok())
                    .is_some_and(|h| has_pure_powers(&h.exponents, q.len()));
                check(
                    pure,
                    format!("homogenized vertices of B_{} lack a pure power", j + 1),
                );
            }
        }
        Err(e) => check(false, e.to_string()),
    }

    let gorenstein = is_gorenstein_matrix(q);
    for sub in q.gamma().subgroups() {
        let label = format!(
            "subgroup {:?}",
            sub.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>()
        );
        match downgrade_geometry(q, &sub) {
            Ok(dg) => {
                check(
                    is_fano(dg.q_tilde.constellation()) == is_fano(k),
                    format!("{label}: Fano changes"),
                );
                check(
                    !gorenstein || is_gorenstein_matrix(&dg.q_tilde),
                    format!("{label}: Gorenstein lost"),
                );
                check(
                    is_almost_free(&dg.q_tilde),
                    format!("{label}: not almost free"),
                );
                let det = dg.a.determinant().map(|d| d.abs());
                check(
                    det.is_ok_and(|d| d == BigInt::from(q.gamma().span(&sub).len())),
                    format!("{label}: |det A| differs from the subgroup order"),
                );
                let product = dg.p_tilde.dual().mul(&dg.a);
                check(
                    product.is_ok_and(|m| m == dg.p.dual()),
                    format!("{label}: P~* A != P*"),
                );
                check(
                    verify_normal_fan(&dg.polytopes, &dg.p_tilde),
                    format!("{label}: transported polytopes lose the fan"),
                );
            }
            Err(e) => check(false, format!("{label}: {e}")),
        }
    }
    failures
}

fn has_pure_powers(exponents: &BTreeSet<Vec<i64>>, n: usize) -> bool {
    (0..n).all(|i| {
        exponents
            .iter()
            .any(|e| e[i] > 0 && e.iter().enumerate().all(|(j, &x)| j == i || x == 0))
    })
}

fn digit(x: u64) -> Result<char> {
    match x {
        0..=9 => Ok(char::from(b'0' + x as u8)),
        10..=12 => Ok(char::from(b'A' + (x - 10) as u8)),
        _ => Err(Error::IdCode(x)),
    }
}

fn weight_code(w: &[u64]) -> Result<String> {
    w.iter().map(|&x| digit(x)).collect()
}

/// `w<weights>t<torsion>-<index>` with weights 10, 11, 12 written A, B, C
/// and torsion `1` when trivial.
pub fn assign_id(weights: &[u64], torsion: &[u64], index: usize) -> Result<String> {
    let t = if torsion.is_empty() {
        "1".to_string()
    } else {
        torsion.iter().map(u64::to_string).collect()
    };
    Ok(format!("w{}t{t}-{index}", weight_code(weights)?))
}

#[derive(Serialize)]
struct RecordRow<'a> {
    id: &'a str,
    weights: &'a [u64],
    torsion: &'a [u64],
    degrees: &'a [u64],
    eta: Vec<Vec<u64>>,
    antican_z: i64,
    antican_torsion: &'a [u64],
    antican_cube: u64,
    h0: u64,
}

fn row(r: &ClassificationRecord) -> RecordRow<'_> {
    RecordRow {
        id: &r.id,
        weights: r.constellation.weights(),
        torsion: r.matrix.gamma().factors(),
        degrees: r.constellation.degrees(),
        eta: r.matrix.torsion_rows(),
        antican_z: r.antican_class.z,
        antican_torsion: r.antican_class.torsion.coords(),
        antican_cube: r.antican_cube,
        h0: r.h0,
    }
}

pub fn to_json(records: &[ClassificationRecord]) -> String {
    let rows: Vec<RecordRow> = records.iter().map(row).collect();
    serde_json::to_string_pretty(&rows).expect("records serialize") + "\n"
}

fn dotted(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(".")
}

/// Vectors are written `a.b.c`; the eta rows are separated by `/`.
pub fn to_csv(records: &[ClassificationRecord]) -> String {
    let mut out =
        String::from("id,weights,torsion,degrees,eta,antican_z,antican_torsion,antican_cube,h0\n");
    for r in records.iter().map(row) {
        let eta: Vec<String> = r.eta.iter().map(|e| dotted(e)).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.id,
            dotted(r.weights),
            dotted(r.torsion),
            dotted(r.degrees),
            eta.join("/"),
            r.antican_z,
            dotted(r.antican_torsion),
            r.antican_cube,
            r.h0
        )
        .expect("writing to a string");
    }
    out
}

fn class_tex(z: i64, torsion: &[u64], factors: &[u64]) -> String {
    let mut s = z.to_string();
    for (x, n) in torsion.iter().zip(factors) {
        let _ = write!(s, ", \\bar{{{x}}}_{{{n}}}");
    }
    format!("({s})")
}

/// LaTeX-style rows: ID, degree data, `-K`, `-K^3`, `h^0(-K)`.
pub fn to_table(records: &[ClassificationRecord]) -> String {
    let mut out = String::from("ID & degree data & $-K$ & $-K^3$ & $h^0(-K)$ \\\\\n\\hline\n");
    for r in records {
        let mut rows = vec![r
            .constellation
            .weights()
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" & ")];
        for (t, n) in r
            .matrix
            .torsion_rows()
            .iter()
            .zip(r.matrix.gamma().factors())
        {
            rows.push(
                t.iter()
                    .map(|x| format!("\\bar{{{x}}}_{{{n}}}"))
                    .collect::<Vec<_>>()
                    .join(" & "),
            );
        }
        let degrees = r
            .constellation
            .degrees()
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(", ");
        writeln!(
            out,
            "{} & $\\left[\\begin{{smallmatrix}} {} \\end{{smallmatrix}}\\right]$, $\\mu = ({degrees})$ & ${}$ & {} & {} \\\\",
            r.id,
            rows.join(" \\\\ "),
            class_tex(r.antican_class.z, r.antican_class.torsion.coords(), r.matrix.gamma().factors()),
            r.antican_cube,
            r.h0
        )
        .expect("writing to a string");
    }
    out
}

/// The worked example: a codimension-one family in weights `(1,2,3,6,6)`
/// of degree 12 with `Γ = Z/2`, its generator matrix, the relation
/// polytope, the homogenized polynomial and the downgrade to trivial
/// torsion.
#[derive(Clone, Debug)]
pub struct ExampleData {
    pub weights: Vec<u64>,
    pub degree: u64,
    pub torsion: u64,
    pub eta: Vec<i64>,
    pub p: Vec<Vec<i64>>,
    pub exponents: Vec<i64>,
    pub vertices: Vec<Vec<i64>>,
    pub count: u64,
    pub homogenized: Vec<Vec<i64>>,
    pub p_tilde: Vec<Vec<i64>>,
    pub a: Vec<Vec<i64>>,
    pub vertices_tilde: Vec<Vec<i64>>,
    pub count_tilde: u64,
}

impl Default for ExampleData {
    fn default() -> Self {
        ExampleData {
            weights: vec![1, 2, 3, 6, 6],
            degree: 12,
            torsion: 2,
            eta: vec![0, 0, 1, 0, 1],
            p: vec![
                vec![1, 1, 1, 0, -1],
                vec![0, 3, 0, 1, -2],
                vec![0, 0, 2, 1, -2],
                vec![0, 0, 0, 2, -2],
            ],
            exponents: vec![12, 6, 4, 2, 2],
            vertices: vec![
                vec![0, 0, 0, 0],
                vec![-12, 4, 6, -5],
                vec![-12, 6, 6, -6],
                vec![-12, 4, 8, -6],
                vec![-12, 4, 6, -4],
            ],
            count: 21,
            homogenized: vec![
                vec![12, 0, 0, 0, 0],
                vec![0, 6, 0, 0, 0],
                vec![0, 0, 4, 0, 0],
                vec![0, 0, 0, 2, 0],
                vec![0, 0, 0, 0, 2],
            ],
            p_tilde: vec![
                vec![1, 1, 1, 0, -1],
                vec![0, 3, 0, 0, -1],
                vec![0, 0, 2, 0, -1],
                vec![0, 0, 0, 1, -1],
            ],
            a: vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 1, 1, 2],
            ],
            vertices_tilde: vec![
                vec![0, 0, 0, 0],
                vec![-12, 4, 6, 0],
                vec![-12, 6, 6, 0],
                vec![-12, 4, 8, 0],
                vec![-12, 4, 6, 2],
            ],
            count_tilde: 36,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureReport {
    pub results: Vec<FixtureResult>,
}

impl FixtureReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&FixtureResult> {
        self.results.iter().filter(|r| !r.passed).collect()
    }
}

pub fn run_fixtures() -> FixtureReport {
    run_fixtures_with(&ExampleData::default())
}

fn vertex_set(s: &LatticeSimplex) -> Option<BTreeSet<Vec<i64>>> {
    s.vertex_support().map(|f| f.exponents().clone())
}

/// Checks every printed value of `data`; each check is reported by name.
pub fn run_fixtures_with(data: &ExampleData) -> FixtureReport {
    let mut results = Vec::new();
    let mut record = |name: &'static str, outcome: std::result::Result<bool, String>| {
        let (passed, detail) = match outcome {
            Ok(true) => (true, String::new()),
            Ok(false) => (false, "value mismatch".to_string()),
            Err(e) => (false, e),
        };
        results.push(FixtureResult {
            name,
            passed,
            detail,
        });
    };
    let err = |e: Error| e.to_string();
    let n = data.weights.len();

    let p_star = IntMatrix::from_rows(&data.p).transpose();
    record(
        "Q P* = 0 in Z x Z/2",
        (|| {
            let w =
                IntMatrix::from_rows(&[data.weights.iter().map(|&x| x as i64).collect::<Vec<_>>()]);
            let t = IntMatrix::from_rows(std::slice::from_ref(&data.eta));
            let free = w.mul(&p_star).map_err(err)?;
            let tors = t.mul(&p_star).map_err(err)?;
            let m = BigInt::from(data.torsion);
            Ok(free.is_zero() && tors.row(0).iter().all(|x| (x % &m) == BigInt::from(0)))
        })(),
    );
    record(
        "cokernel of P* is Z x Z/2",
        Ok(cokernel_structure(&p_star) == vec![BigInt::from(0), BigInt::from(data.torsion)]),
    );

    let q = (|| {
        let k = WeightDegreeConstellation::from_parts(DIMENSION, &data.weights, &[data.degree])?;
        let gamma = FiniteAbelianGroup::new(vec![data.torsion])?;
        DegreeMatrix::from_torsion_rows(k, gamma, std::slice::from_ref(&data.eta))
    })();
    let p = GeneratorMatrix::from_rows(&data.p);
    record(
        "P reproduces Q",
        match (&q, &p) {
            (Ok(q), Ok(p)) => (|| {
                let back = matrix_from_kernel(q.constellation(), p.matrix())?;
                Ok(canonical_form(&back)? == canonical_form(q)?)
            })()
            .map_err(err),
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        },
    );

    let b = p.clone().and_then(|p| {
        let mut shifts = vec![0; n];
        shifts[0] = data.exponents[0];
        LatticeSimplex::with_rays(&p, shifts)
    });
    let printed: BTreeSet<Vec<i64>> = data.vertices.iter().cloned().collect();
    record(
        "vertices of B",
        b.as_ref()
            .map(|b| vertex_set(b) == Some(printed.clone()))
            .map_err(|e| e.to_string()),
    );
    record(
        "lattice points of B",
        b.as_ref()
            .map(|b| count_lattice_points(b) == data.count)
            .map_err(|e| e.to_string()),
    );
    record(
        "normal fan of B",
        match (&b, &p) {
            (Ok(b), Ok(p)) => Ok(verify_normal_fan(std::slice::from_ref(b), p)),
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        },
    );
    record(
        "homogenization of f",
        (|| {
            let p = p.clone().map_err(err)?;
            let q = q.clone().map_err(err)?;
            let f = LaurentSupport::new(n - 1, printed.clone()).map_err(err)?;
            let h = homogenize(&f, &p).map_err(err)?;
            let expected: BTreeSet<Vec<i64>> = data.homogenized.iter().cloned().collect();
            let degrees: BTreeSet<(i64, Vec<u64>)> = h
                .exponents
                .iter()
                .map(|e| {
                    let z = e.iter().zip(q.weights()).map(|(&x, &w)| x * w as i64).sum();
                    let t = q
                        .eta()
                        .iter()
                        .zip(e)
                        .fold(q.gamma().zero(), |acc, (g, &x)| {
                            q.gamma().add(&acc, &q.gamma().scale(g, x))
                        });
                    (z, t.coords().to_vec())
                })
                .collect();
            let target: BTreeSet<(i64, Vec<u64>)> =
                [(data.degree as i64, vec![0])].into_iter().collect();
            Ok(h.exponents == expected && degrees == target)
        })(),
    );

    let p_tilde = GeneratorMatrix::from_rows(&data.p_tilde);
    record(
        "P~* A = P*",
        (|| {
            let pt = p_tilde.clone().map_err(err)?;
            let a = IntMatrix::from_rows(&data.a);
            let product = pt.dual().mul(&a).map_err(err)?;
            let solved = transport_matrix(&p.clone().map_err(err)?, &pt).map_err(err)?;
            Ok(product == p_star && solved == a)
        })(),
    );
    record(
        "Q~ P~* = 0",
        (|| {
            let pt = p_tilde.clone().map_err(err)?;
            let w =
                IntMatrix::from_rows(&[data.weights.iter().map(|&x| x as i64).collect::<Vec<_>>()]);
            Ok(w.mul(&pt.dual()).map_err(err)?.is_zero()
                && cokernel_structure(&pt.dual()) == vec![BigInt::from(0)])
        })(),
    );
    let b_tilde = match (&b, &p_tilde) {
        (Ok(b), Ok(pt)) => transport_simplex(b, pt).map_err(err),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    };
    let printed_tilde: BTreeSet<Vec<i64>> = data.vertices_tilde.iter().cloned().collect();
    record(
        "vertices of A B",
        b_tilde
            .as_ref()
            .map(|s| vertex_set(s) == Some(printed_tilde.clone()))
            .map_err(Clone::clone),
    );
    record(
        "A maps the vertices of B",
        (|| {
            let a = IntMatrix::from_rows(&data.a);
            let mapped = printed
                .iter()
                .map(|v| {
                    let x: Vec<BigInt> = v.iter().map(|&t| BigInt::from(t)).collect();
                    a.mul_vec(&x).map(|y| {
                        y.iter()
                            .map(|t| t.to_i64().expect("small"))
                            .collect::<Vec<_>>()
                    })
                })
                .collect::<Result<BTreeSet<_>>>()
                .map_err(err)?;
            Ok(mapped == printed_tilde)
        })(),
    );
    record(
        "lattice points of A B",
        b_tilde
            .as_ref()
            .map(|s| count_lattice_points(s) == data.count_tilde)
            .map_err(Clone::clone),
    );
    FixtureReport { results }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids() {
        assert_eq!(assign_id(&[1, 3, 8, 12, 12], &[], 1).unwrap(), "w138CCt1-1");
        assert_eq!(assign_id(&[1, 4, 5, 10, 10], &[], 1).unwrap(), "w145AAt1-1");
        assert!(assign_id(&[1, 1, 1, 1, 1], &[2, 2], 3)
            .unwrap()
            .starts_with("w11111t22-"));
        assert_eq!(assign_id(&[1, 13], &[], 1), Err(Error::IdCode(13)));
    }

    #[test]
    fn fixtures_pass() {
        let report = run_fixtures();
        assert!(report.all_passed(), "{:?}", report.failures());
        assert_eq!(report.results.len(), 12);
    }

    #[test]
    fn perturbed_generator_fails() {
        let mut data = ExampleData::default();
        data.p[1][1] = 2;
        let report = run_fixtures_with(&data);
        assert!(report
            .failures()
            .iter()
            .any(|f| f.name == "Q P* = 0 in Z x Z/2"));
    }

    #[test]
    fn perturbed_exponent_fails() {
        let mut data = ExampleData::default();
        data.exponents[0] = 10;
        let report = run_fixtures_with(&data);
        let failed: Vec<&str> = report.failures().iter().map(|f| f.name).collect();
        assert!(failed.contains(&"vertices of B"), "{failed:?}");
        assert!(!failed.contains(&"Q P* = 0 in Z x Z/2"));
    }

    #[test]
    fn codimension_three_run() {
        let (records, summary) = classify(3, &[3].into_iter().collect()).unwrap();
        assert_eq!(summary.total, records.len());
        assert_eq!(records.first().map(|r| r.id.as_str()), Some("w1111111t1-1"));
        for r in &records {
            assert!(check_record(r).is_empty(), "{:?}", check_record(r));
        }
        let again = classify(3, &[3].into_iter().collect()).unwrap().0;
        assert_eq!(to_json(&records), to_json(&again));
        assert_eq!(to_csv(&records).lines().count(), records.len() + 1);
    }
}
