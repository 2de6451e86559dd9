use std::collections::{BTreeMap, HashMap};

use gtci_core::constellations::{
    enumerate_constellations, exponent_tuple, WeightDegreeConstellation,
};
use gtci_core::torsion::{
    canonical_form, downgrade_matrix, enumerate_degree_matrices, enumerate_degree_matrices_with,
    is_almost_free, is_gorenstein_matrix, is_homogeneous, DegreeMatrix, FiniteAbelianGroup,
};
use proptest::prelude::*;

fn k(w: &[u64], mu: &[u64]) -> WeightDegreeConstellation {
    WeightDegreeConstellation::from_parts(3, w, mu).unwrap()
}

fn group(f: &[u64]) -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(f.to_vec()).unwrap()
}

fn matrix(w: &[u64], mu: &[u64], f: &[u64], rows: &[Vec<i64>]) -> DegreeMatrix {
    DegreeMatrix::from_torsion_rows(k(w, mu), group(f), rows).unwrap()
}

type Rows = Vec<Vec<u64>>;

fn reduce(rows: &mut Rows, factors: &[u64]) {
    for (r, &n) in rows.iter_mut().zip(factors) {
        r.iter_mut().for_each(|x| *x %= n);
    }
}

/// All single applications of the elementary operations: unit multiples
/// of a torsion row, adding an earlier row (the weight row included),
/// adding `n_i / n_j` times a later row, and swapping equal-weight columns.
fn neighbours(rows: &Rows, weights: &[u64], factors: &[u64]) -> Vec<Rows> {
    let mut out = Vec::new();
    let n = weights.len();
    for (i, &ni) in factors.iter().enumerate() {
        for z in 2..ni {
            if gcd(z, ni) == 1 {
                let mut r = rows.clone();
                r[i].iter_mut().for_each(|x| *x *= z);
                out.push(r);
            }
        }
        let mut r = rows.clone();
        for c in 0..n {
            r[i][c] += weights[c];
        }
        out.push(r);
        for j in 0..i {
            let mut r = rows.clone();
            for c in 0..n {
                r[i][c] += rows[j][c];
            }
            out.push(r);
        }
        for j in i + 1..factors.len() {
            let mut r = rows.clone();
            for c in 0..n {
                r[i][c] += (ni / factors[j]) * rows[j][c];
            }
            out.push(r);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if weights[a] == weights[b] {
                let mut r = rows.clone();
                r.iter_mut().for_each(|row| row.swap(a, b));
                out.push(r);
            }
        }
    }
    for r in &mut out {
        reduce(r, factors);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Classes of admissible torsion parts over `Γ` by brute force over all
/// of `Γ^n`, merged along the elementary operations.
fn brute_force_classes(kk: &WeightDegreeConstellation, factors: &[u64]) -> usize {
    let g = group(factors);
    let n = kk.weights().len();
    let elements = g.elements();
    let mut valid: Vec<Rows> = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let eta: Vec<_> = idx.iter().map(|&i| elements[i].clone()).collect();
        if is_homogeneous(kk, &g, &eta) {
            let q = DegreeMatrix::new(kk.clone(), g.clone(), eta).unwrap();
            if is_almost_free(&q) && is_gorenstein_matrix(&q) {
                valid.push(q.torsion_rows());
            }
        }
        let mut t = 0;
        loop {
            if t == n {
                break;
            }
            idx[t] += 1;
            if idx[t] < elements.len() {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
        if t == n {
            break;
        }
    }
    let position: HashMap<Rows, usize> = valid
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();
    let mut parent: Vec<usize> = (0..valid.len()).collect();
    for (i, rows) in valid.iter().enumerate() {
        for nb in neighbours(rows, kk.weights(), factors) {
            let j = *position
                .get(&nb)
                .expect("operations preserve admissibility");
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    (0..valid.len())
        .filter(|&i| find(&mut parent, i) == i)
        .count()
}

#[test]
fn enumeration_matches_brute_force_on_small_groups() {
    let groups: [&[u64]; 6] = [&[2], &[3], &[4], &[2, 2], &[6], &[2, 2, 2]];
    for (w, mu) in [
        (&[1, 1, 1, 1, 1][..], &[3][..]),
        (&[1, 1, 1, 1, 2], &[4]),
        (&[1, 1, 2, 2, 2], &[4]),
        (&[1, 1, 2, 2, 2], &[6]),
        (&[1, 1, 2, 4, 4], &[8]),
        (&[1, 2, 3, 6, 6], &[12]),
    ] {
        let kk = k(w, mu);
        let classes = enumerate_degree_matrices(&kk).unwrap();
        let mut by_group: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        for c in &classes {
            *by_group
                .entry(c.representative.gamma().factors().to_vec())
                .or_default() += 1;
        }
        for f in groups {
            let expected = brute_force_classes(&kk, f);
            let got = by_group.get(f).copied().unwrap_or(0);
            assert_eq!(got, expected, "{kk} over {f:?}");
        }
    }
}

#[test]
fn worked_example_class_is_enumerated() {
    let q = matrix(&[1, 2, 3, 6, 6], &[12], &[2], &[vec![0, 0, 1, 0, 1]]);
    let target = canonical_form(&q).unwrap();
    let classes = enumerate_degree_matrices(q.constellation()).unwrap();
    assert!(classes.iter().any(|c| c.representative == target));
}

#[test]
fn canonical_form_examples() {
    let a = matrix(&[1, 1, 1, 1, 1], &[2], &[2], &[vec![0, 1, 1, 0, 0]]);
    let b = matrix(&[1, 1, 1, 1, 1], &[2], &[2], &[vec![1, 1, 0, 0, 0]]);
    assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());

    // The shear by the generator sends (0,0,1,0,1) to (1,0,0,0,0), whose
    // orbit {(1,0,0,0,0), (0,0,1,0,1), (0,0,1,1,0)} misses (1,0,1,1,1).
    let c = matrix(&[1, 2, 3, 6, 6], &[12], &[2], &[vec![0, 0, 1, 0, 1]]);
    let d = matrix(&[1, 2, 3, 6, 6], &[12], &[2], &[vec![1, 0, 1, 1, 1]]);
    let in_orbit = orbit(&c).contains(&d.torsion_rows());
    assert!(!in_orbit);
    assert_eq!(
        canonical_form(&c).unwrap() == canonical_form(&d).unwrap(),
        in_orbit
    );
}

fn orbit(q: &DegreeMatrix) -> Vec<Rows> {
    let mut seen = vec![q.torsion_rows()];
    let mut i = 0;
    while i < seen.len() {
        for nb in neighbours(&seen[i], q.weights(), q.gamma().factors()) {
            if !seen.contains(&nb) {
                seen.push(nb);
            }
        }
        i += 1;
    }
    seen
}

#[test]
fn prime_bound_filter_changes_nothing() {
    for c in 1..=3 {
        for kk in enumerate_constellations(3, c).unwrap() {
            assert_eq!(
                enumerate_degree_matrices_with(&kk, true).unwrap(),
                enumerate_degree_matrices_with(&kk, false).unwrap(),
                "{kk}"
            );
        }
    }
}

#[test]
fn enumerated_classes_satisfy_the_torsion_bounds() {
    for c in 1..=3 {
        for kk in enumerate_constellations(3, c).unwrap() {
            let ls = exponent_tuple(&kk);
            for class in enumerate_degree_matrices(&kk).unwrap() {
                let q = &class.representative;
                let factors = q.gamma().factors();
                assert!(factors.len() < kk.d() + kk.c());
                assert!(is_homogeneous(&kk, q.gamma(), q.eta()));
                assert!(is_almost_free(q) && is_gorenstein_matrix(q));
                assert_eq!(
                    canonical_form(q).unwrap(),
                    *q,
                    "representatives are canonical"
                );
                for p in [2u64, 3, 5, 7, 11] {
                    if q.gamma().order() % p == 0 {
                        for l in &ls {
                            let divisible = l.exponents().iter().filter(|&&e| e % p == 0).count();
                            assert!(divisible >= 2, "{kk} {factors:?} prime {p}");
                        }
                    }
                }
                for &n in factors {
                    if kk.weights().iter().any(|&w| gcd(w, n) == 1) {
                        assert!(
                            kk.degrees().iter().all(|&mu| mu % n == 0),
                            "{kk} {factors:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn downgrade_extremes() {
    let q = matrix(&[1, 2, 3, 6, 6], &[12], &[2], &[vec![0, 0, 1, 0, 1]]);
    let full: Vec<_> = vec![q.gamma().element(&[1]).unwrap()];
    let down = downgrade_matrix(&q, &full).unwrap();
    assert!(down.gamma().is_trivial());
    assert_eq!(down.weights(), &[1, 2, 3, 6, 6]);
    assert_eq!(downgrade_matrix(&q, &[]).unwrap(), q);
}

fn nontrivial_representatives() -> Vec<DegreeMatrix> {
    [
        k(&[1, 1, 1, 1, 2], &[4]),
        k(&[1, 1, 2, 2, 2], &[4]),
        k(&[1, 1, 2, 4, 4], &[8]),
        k(&[1, 1, 1, 1, 1, 1], &[2, 2]),
    ]
    .iter()
    .flat_map(|kk| enumerate_degree_matrices(kk).unwrap())
    .map(|c| c.representative)
    .filter(|q| !q.gamma().is_trivial())
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_constant_on_orbits(pick in any::<prop::sample::Index>(), walk in prop::collection::vec(any::<prop::sample::Index>(), 0..12)) {
        let reps = nontrivial_representatives();
        let q = &reps[pick.index(reps.len())];
        let mut rows = q.torsion_rows();
        for step in &walk {
            let nbs = neighbours(&rows, q.weights(), q.gamma().factors());
            rows = nbs[step.index(nbs.len())].clone();
        }
        let signed: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        let moved = DegreeMatrix::from_torsion_rows(q.constellation().clone(), q.gamma().clone(), &signed).unwrap();
        prop_assert!(is_almost_free(&moved) && is_gorenstein_matrix(&moved));
        let canon = canonical_form(&moved).unwrap();
        prop_assert_eq!(&canon, q);
        prop_assert_eq!(canonical_form(&canon).unwrap(), canon);
    }

    #[test]
    fn canonical_form_is_idempotent(row in prop::collection::vec(0i64..4, 5)) {
        let kk = k(&[1, 1, 1, 1, 2], &[4]);
        if let Ok(q) = DegreeMatrix::from_torsion_rows(kk, group(&[4]), &[row]) {
            let c = canonical_form(&q).unwrap();
            prop_assert_eq!(canonical_form(&c).unwrap(), c.clone());
            prop_assert!(orbit(&q).contains(&c.torsion_rows()));
        }
    }
}
