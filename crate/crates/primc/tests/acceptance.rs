//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every comparison is exact integer arithmetic; there are no tolerances.
//! Run with `cargo test -p primc --test acceptance -- --nocapture` to see the
//! per-criterion lines and timings.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;

use primc::characters::{
    char_kp, char_positive, first_difference, gp_ct, gp_ct_shifted, gp_lattice, gp_theta,
    principal_spec,
};
use primc::crystal::{
    box_data, check_axioms, pair_graph, BoxCrystal, Crystal, PairCrystal, VectorCrystal,
};
use primc::energy::{check_dual_symmetry, check_recurrence, energy_table, verify_theorem, Colour};
use primc::partitions::{
    enumerate_grounded_with_table, gf_capparelli, gf_grounded, merge_phi, partition_to_path,
    split_phi, CapparelliSpec, Mode,
};
use primc::{Monomial, PairVertex, Series};

struct Criterion {
    label: &'static str,
    limit: Option<Duration>,
    start: Instant,
}

impl Criterion {
    fn begin(label: &'static str, limit_secs: Option<u64>) -> Self {
        Criterion {
            label,
            limit: limit_secs.map(Duration::from_secs),
            start: Instant::now(),
        }
    }

    fn finish(self) {
        let elapsed = self.start.elapsed();
        println!("criterion {}: PASS ({:.2?})", self.label, elapsed);
        if let Some(limit) = self.limit {
            assert!(
                elapsed <= limit,
                "criterion {} exceeded its runtime budget: {elapsed:.2?} > {limit:?}",
                self.label
            );
        }
    }
}

fn p2() -> (Vec<Colour>, Vec<Vec<i64>>) {
    let order = [(1, 0), (0, 0), (1, 1), (0, 1)]
        .iter()
        .map(|&(a, b)| Colour { a, b })
        .collect();
    let matrix = vec![
        vec![2, 1, 2, 2],
        vec![1, 0, 1, 1],
        vec![0, 1, 0, 2],
        vec![0, 1, 0, 2],
    ];
    (order, matrix)
}

fn p3() -> (Vec<Colour>, Vec<Vec<i64>>) {
    let order = [
        (2, 0),
        (2, 1),
        (1, 0),
        (0, 0),
        (2, 2),
        (1, 1),
        (0, 1),
        (1, 2),
        (0, 2),
    ]
    .iter()
    .map(|&(a, b)| Colour { a, b })
    .collect();
    let matrix = vec![
        vec![2, 2, 2, 1, 2, 2, 2, 2, 2],
        vec![1, 2, 1, 1, 2, 1, 2, 2, 2],
        vec![1, 1, 2, 1, 1, 2, 2, 2, 2],
        vec![1, 1, 1, 0, 1, 1, 1, 1, 1],
        vec![0, 0, 1, 1, 0, 1, 1, 2, 2],
        vec![0, 1, 0, 1, 1, 0, 2, 1, 2],
        vec![0, 1, 0, 1, 1, 0, 2, 1, 2],
        vec![0, 0, 1, 1, 0, 1, 1, 2, 2],
        vec![0, 0, 0, 1, 0, 0, 1, 1, 2],
    ];
    (order, matrix)
}

#[test]
fn criterion_1_energy_fixtures() {
    let c = Criterion::begin("1 (energy fixtures P2, P3)", Some(1));
    for (n, (order, matrix)) in [(2usize, p2()), (3, p3())] {
        let table = energy_table(n).expect("table");
        assert_eq!(
            table.matrix(&order),
            matrix,
            "published matrix mismatch at n={n}"
        );
    }
    c.finish();
}

#[test]
fn criterion_2_energy_equals_minimal_difference() {
    let c = Criterion::begin("2 (energy = minimal difference, n = 2..7)", Some(10));
    for n in 2..=7 {
        let report = verify_theorem(n).expect("theorem run");
        assert!(report.pass, "n={n}: {:?}", report.first_counterexample);
        assert_eq!(report.checks, n.pow(4));
    }
    c.finish();
}

#[test]
fn criterion_3_generating_function_chain() {
    let c = Criterion::begin(
        "3 (constant term = lattice = theta = enumeration)",
        Some(120),
    );
    for (n, trunc) in [(2usize, 20i64), (3, 14), (4, 10)] {
        let ct = gp_ct(n, trunc).expect("ct");
        let lattice = gp_lattice(n, trunc).expect("lattice");
        assert_eq!(first_difference(&ct, &lattice), None, "lattice n={n}");
        let theta = gp_theta(n, trunc).expect("theta");
        assert_eq!(first_difference(&ct, &theta), None, "theta n={n}");
        let enumerated = gf_grounded(n, 0, trunc, false).expect("enumeration");
        assert_eq!(
            first_difference(&ct, &enumerated),
            None,
            "enumeration n={n}"
        );
    }
    c.finish();
}

#[test]
fn criterion_4_and_5_characters_and_positivity() {
    let c = Criterion::begin("4+5 (character chain and alpha-positivity)", Some(120));
    let trunc = 10i64;
    for n in [2usize, 3] {
        for ell in 0..n {
            let shifted = gp_ct_shifted(n, ell, trunc).expect("shifted gp");
            let lhs = Series::euler(n, trunc).mul(&shifted).expect("context");
            let kp = char_kp(n, ell, trunc).expect("kp");
            assert_eq!(
                first_difference(&lhs, &kp),
                None,
                "euler * shifted-gp vs kp at n={n} ell={ell}"
            );
            let positive = char_positive(n, ell, trunc).expect("positive");
            assert_eq!(
                first_difference(&kp, &positive),
                None,
                "kp vs positive at n={n} ell={ell}"
            );
            let minimal = gf_grounded(n, ell, trunc, true).expect("minimal gf");
            assert_eq!(
                first_difference(&kp, &minimal),
                None,
                "kp vs minimal enumeration at n={n} ell={ell}"
            );
            // criterion 5 on the same characters
            let conv = kp.to_alpha().expect("alpha basis");
            assert!(
                conv.violations.is_empty(),
                "negative alpha exponent at n={n} ell={ell}: {:?}",
                conv.violations.first().map(|v| v.monomial.to_string())
            );
            assert!(
                conv.terms.values().all(|c| c > &BigInt::from(0)),
                "non-positive coefficient at n={n} ell={ell}"
            );
        }
    }
    c.finish();
}

#[test]
fn criterion_6_capparelli_identity() {
    let c = Criterion::begin("6 (capparelli = euler * gp, two specs per rank)", Some(120));
    let trunc = 12i64;
    for n in [2usize, 3] {
        let target = Series::euler(n, trunc)
            .mul(&gp_ct(n, trunc).expect("gp"))
            .expect("context");
        let specs = [
            CapparelliSpec::canonical(n).expect("canonical spec"),
            CapparelliSpec::alternate(n).expect("alternate spec"),
        ];
        if n >= 3 {
            assert_ne!(
                specs[0].delta_fn, specs[1].delta_fn,
                "deltas should differ at n={n}"
            );
        }
        for (which, spec) in specs.iter().enumerate() {
            let gf = gf_capparelli(spec, trunc).expect("capparelli gf");
            assert_eq!(
                first_difference(&gf, &target),
                None,
                "capparelli identity at n={n}, spec {which}"
            );
        }
    }
    c.finish();
}

#[test]
fn criterion_7_principal_specialisation() {
    let c = Criterion::begin("7 (principal specialisation to q^30)", None);
    for n in [2usize, 3, 4, 5] {
        let report = principal_spec(n, 30).expect("principal run");
        assert!(
            report.all_pass(),
            "n={n}: {:?}",
            report
                .checks
                .iter()
                .find(|c| !c.pass)
                .map(|c| (&c.name, &c.detail))
        );
    }
    c.finish();
}

#[test]
fn criterion_8_bijections() {
    let c = Criterion::begin(
        "8 (path and staircase bijections, eq. weight laws)",
        Some(30),
    );
    let n = 3;
    let max_weight = 10i64;
    let table = energy_table(n).expect("table");
    for ell in 0..n {
        let all = enumerate_grounded_with_table(&table, ell, max_weight, false).expect("enumerate");
        let minimal =
            enumerate_grounded_with_table(&table, ell, max_weight, true).expect("enumerate");
        let minimal_set: std::collections::BTreeSet<_> = minimal.iter().cloned().collect();
        for p in &all {
            let (mu, nu) = split_phi(&table, ell, p).expect("split");
            // weight additivity
            assert_eq!(
                p.weight(),
                mu.weight() + nu.iter().sum::<i64>(),
                "weight law at {p}"
            );
            // colour preservation: proper colours of mu prefix those of pi,
            // and the colour monomials agree (ground colour contributes 1)
            for (k, q) in mu.parts.iter().enumerate() {
                assert_eq!(q.colour, p.parts[k].colour, "colour changed at {p}");
            }
            assert_eq!(
                mu.monomial(n).b_exps,
                p.monomial(n).b_exps,
                "colour monomial changed at {p}"
            );
            // double round-trip
            let back = merge_phi(&table, ell, &mu, &nu).expect("merge");
            assert_eq!(&back, p, "merge(split) != id at {p}");
            let (mu2, nu2) = split_phi(&table, ell, &back).expect("split again");
            assert_eq!(
                (mu2, nu2),
                (mu.clone(), nu.clone()),
                "split not idempotent at {p}"
            );
            // the minimal component is itself enumerated when small enough
            if mu.weight() <= max_weight {
                assert!(minimal_set.contains(&mu), "{mu} missing from minimal list");
            }
        }
        // path bijection and its weight law on every minimal partition
        let ground = BoxCrystal::ground(ell);
        let boxes = BoxCrystal::new(n).expect("box crystal");
        for p in &minimal {
            let path = partition_to_path(&table, ell, p).expect("to path");
            let back = primc::partitions::path_to_partition(&table, ell, &path).expect("from path");
            assert_eq!(&back, p, "path round-trip at {p}");
            // q-weight law: |pi| = sum (k+1) H(p_{k+1} (x) p_k), ground appended
            let s = path.len();
            let mut weighted = 0i64;
            for k in 0..s {
                let next = if k + 1 < s { path[k + 1] } else { ground };
                weighted += (k as i64 + 1) * table.h(next, path[k]);
            }
            assert_eq!(p.weight(), weighted, "q-weight law at {p}");
            // colour law: sum of crystal weights equals the b-monomial read
            // through wt v_i: sum_i e_i (Lambda_{i+1} - Lambda_i)
            let mut total = vec![0i64; n];
            for v in &path {
                for (i, w) in boxes.wt(v).0.iter().enumerate() {
                    total[i] += w;
                }
            }
            let e = p.monomial(n).b_exps;
            let mut from_colours = vec![0i64; n];
            for (i, ei) in e.iter().enumerate() {
                from_colours[(i + 1) % n] += ei;
                from_colours[i] -= ei;
            }
            assert_eq!(total, from_colours, "classical weight law at {p}");
        }
        // the two generating functions differ by exactly 1/(q;q)
        let gf_all = gf_grounded(n, ell, max_weight, false).expect("gf");
        let gf_min = gf_grounded(n, ell, max_weight, true).expect("gf minimal");
        let recombined = gf_min
            .mul(&Series::euler_inverse(n, max_weight))
            .expect("context");
        assert_eq!(first_difference(&gf_all, &recombined), None, "ell={ell}");
    }
    c.finish();
}

#[test]
fn criterion_9_crystal_axioms() {
    let c = Criterion::begin(
        "9 (crystal axioms, closed forms, symmetry, connectivity)",
        None,
    );
    for n in 3..=7 {
        let vec_crystal = VectorCrystal::new(n).expect("vector crystal");
        check_axioms(&vec_crystal, &vec_crystal.vertices().collect::<Vec<_>>())
            .expect("vector axioms");
        let boxes = BoxCrystal::new(n).expect("box crystal");
        let box_elems: Vec<_> = boxes.vertices().collect();
        check_axioms(&boxes, &box_elems).expect("box axioms");
        let pairs = PairCrystal::new(n).expect("pair crystal");
        let pair_elems: Vec<PairVertex> = pairs.vertices().collect();
        check_axioms(&pairs, &pair_elems).expect("pair axioms");
        // closed forms agree with the generic tensor statistics
        for b in &box_elems {
            let (w, phi, eps) = box_data(n, *b).expect("closed form");
            assert_eq!(w, boxes.wt(b));
            assert_eq!(phi, boxes.phi_weight(b));
            assert_eq!(eps, boxes.eps_weight(b));
        }
        // dual symmetry of the finished energy table, plus the recurrence
        // and the value range
        let table = energy_table(n).expect("table");
        check_dual_symmetry(n, &table).expect("dual symmetry");
        check_recurrence(n, &table).expect("edge recurrence");
        for c1 in Colour::all(n) {
            for c2 in Colour::all(n) {
                assert!((0..=2).contains(&table.min_difference(c1, c2)), "n={n}");
            }
        }
        // connectivity of the pair graph
        let graph = pair_graph(n).expect("graph");
        assert_eq!(graph.vertices.len(), n.pow(4));
        assert!(graph.connected, "pair graph disconnected at n={n}");
    }
    c.finish();
}

#[test]
fn grounded_counts_against_series_oracle() {
    // counts of minimal grounded partitions by weight at n=2 equal the
    // coefficient sums of (q;q) * G^P with every b set to 1
    let n = 2;
    let trunc = 10i64;
    let product = Series::euler(n, trunc)
        .mul(&gp_ct(n, trunc).expect("gp"))
        .expect("context")
        .collapse_b();
    let table = energy_table(n).expect("table");
    let minimal = enumerate_grounded_with_table(&table, 0, trunc, true).expect("enumerate");
    for m in 0..=trunc {
        let count = minimal.iter().filter(|p| p.weight() == m).count();
        assert_eq!(
            product.coeff(&Monomial::q_power(n, m)),
            BigInt::from(count),
            "weight {m}"
        );
    }
    let trivially_one = product.coeff(&Monomial::q_power(n, 0));
    assert!(trivially_one.is_one());
}

#[test]
fn minimal_partitions_are_exactly_path_images() {
    let n = 3;
    let table = energy_table(n).expect("table");
    for ell in 0..n {
        let minimal = enumerate_grounded_with_table(&table, ell, 6, true).expect("enumerate");
        for p in &minimal {
            assert!(primc::partitions::is_grounded(&table, ell, p, Mode::Exact));
        }
    }
}
