//! Acceptance run: one line per criterion, PASS or FAIL.
//!
//! Some criteria fail on a precisely predicted set of instances (see `predicted`). The run
//! exits with an error when any criterion fails on an instance outside that set, or passes
//! on an instance inside it.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spbdiv::arith::{divisors, factorize, rat, rat_int, valuation};
use spbdiv::cusps::{cusp_classes, enumerate_types, types_count_formula};
use spbdiv::divisors::{
    boundary_divisor_of_invariant, characterization_check, is_special, spbdiv_dimension, special_divisor, type_view,
};
use spbdiv::invariants::{char_vector, invariant_space_dim, is_invariant, types_span, types_span_dimension_formula, weil_s, weil_t};
use spbdiv::qeta::{cross_validate_boundary, eta_identity_check, relation_lift_check};
use spbdiv::{BoundaryDivisor, CyclotomicNumber, DiscriminantForm, ExactMatrix, FqmSubgroup, Guard, PsiConvention, Rational};

const SEED: u64 = 0x5eed_2024;

struct Outcome {
    /// Instances on which the criterion's claim did not hold.
    failures: BTreeSet<String>,
    /// Instances checked.
    checked: usize,
    budget: Option<Duration>,
    elapsed: Duration,
}

fn run(budget: Option<u64>, body: impl FnOnce(&mut Vec<String>) -> usize) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let checked = body(&mut failures);
    Outcome {
        failures: failures.into_iter().collect(),
        checked,
        budget: budget.map(Duration::from_secs),
        elapsed: start.elapsed(),
    }
}

fn pairs(max_n: i64) -> Vec<(i64, i64)> {
    (1..=max_n).flat_map(|n| divisors(n).into_iter().map(move |np| (n, np))).collect()
}

fn form(n: i64, np: i64) -> DiscriminantForm {
    DiscriminantForm::new(n, np).unwrap()
}

fn omega(n: i64) -> usize {
    factorize(n).len()
}

/// Whether the span of the types is all invariants: every prime of `N'` divides `N` once,
/// and at most one prime divides `N'`.
fn types_span_everything(n: i64, np: i64) -> bool {
    omega(np) <= 1 && factorize(np).iter().all(|&(p, _)| valuation(n, p) == 1)
}

fn big_guard() -> Guard {
    Guard::new(1 << 40)
}

fn c1_type_count() -> Outcome {
    run(Some(60), |fail| {
        let mut list = pairs(24);
        for n in [2, 4, 8, 9, 27, 25] {
            list.extend(divisors(n).into_iter().map(|np| (n, np)));
        }
        list.sort();
        list.dedup();
        for &(n, np) in &list {
            let got = enumerate_types(&form(n, np)).len() as u64;
            let want = types_count_formula(n, np).unwrap();
            if got != want {
                fail.push(format!("({n},{np}) {got} vs {want}"));
            }
        }
        list.len()
    })
}

fn c2_self_duality() -> Outcome {
    run(None, |fail| {
        let list: Vec<_> = pairs(36).into_iter().filter(|(n, np)| n * np <= 36).collect();
        for &(n, np) in &list {
            for (h, w) in enumerate_types(&form(n, np)) {
                let ord = h.order() as i64;
                if !h.is_self_dual_isotropic() || ord * ord != n * n * np * np {
                    fail.push(format!("({n},{np}) {w}"));
                }
            }
        }
        list.len()
    })
}

fn c3_span_dimension() -> Outcome {
    run(Some(120), |fail| {
        let list = pairs(24);
        for &(n, np) in &list {
            let f = form(n, np);
            let span = types_span(&f).unwrap().dimension as u64;
            let formula = types_span_dimension_formula(n, np).unwrap();
            let divisors = spbdiv_dimension(&f, &Guard::default()).unwrap() as u64;
            if span != formula {
                fail.push(format!("({n},{np}) span {span} vs formula {formula}"));
            }
            if span != divisors {
                fail.push(format!("({n},{np}) span {span} vs divisors {divisors}"));
            }
        }
        for (n, np, want) in [(2, 2, 5), (4, 1, 3), (6, 6, 35)] {
            let got = types_span(&form(n, np)).unwrap().dimension as u64;
            if got != want {
                fail.push(format!("example ({n},{np}) {got} vs {want}"));
            }
        }
        list.len() + 3
    })
}

fn c4_relation() -> Outcome {
    run(None, |fail| {
        let mut checked = 0;
        for p in [2i64, 3, 5] {
            for r in 1..=5u32 {
                let n = p.pow(r);
                if n > 27 {
                    continue;
                }
                for rp in 0..=r {
                    let want = usize::from(rp >= 1);
                    let got = types_span(&form(n, p.pow(rp))).unwrap().relations.len();
                    checked += 1;
                    if got != want {
                        fail.push(format!("({p},{r},{rp}) kernel {got}"));
                    }
                }
            }
        }
        checked
    })
}

fn c5_squarefree() -> Outcome {
    run(None, |fail| {
        let mut checked = 0;
        let guard = Guard::new(1296);
        for (n, strict) in [(1, false), (2, false), (3, false), (5, false), (6, false), (12, false), (4, true), (8, true), (9, true)] {
            for np in divisors(n) {
                let f = form(n, np);
                if f.order() > 1296 {
                    continue;
                }
                checked += 1;
                let span = types_span(&f).unwrap().dimension;
                let inv = invariant_space_dim(&f, &guard).unwrap();
                let ok = if strict { span < inv } else { span == inv };
                if !ok {
                    fail.push(format!("({n},{np}) span {span} invariants {inv}"));
                }
            }
        }
        checked
    })
}

/// Entries of `mat` as `scale * zeta_m^k`; `None` marks a zero entry.
fn as_monomials(mat: &ExactMatrix<CyclotomicNumber>, m: u64, scale: &Rational) -> Option<Vec<Option<usize>>> {
    let roots: Vec<CyclotomicNumber> = (0..m as i64).map(|k| CyclotomicNumber::root_of_unity(m, k).scale(scale)).collect();
    let mut out = Vec::with_capacity(mat.rows() * mat.cols());
    for i in 0..mat.rows() {
        for j in 0..mat.cols() {
            let x = mat.get(i, j);
            if x.is_zero() {
                out.push(None);
            } else {
                out.push(Some(roots.iter().position(|r| r == x)?));
            }
        }
    }
    Some(out)
}

/// Square matrices over the integral group ring of `Z/m`, row-major with `m` counts per entry.
struct RingMatrix {
    n: usize,
    m: usize,
    counts: Vec<i64>,
}

impl RingMatrix {
    fn from_monomials(n: usize, m: usize, mono: &[Option<usize>]) -> Self {
        let mut counts = vec![0; n * n * m];
        for (idx, k) in mono.iter().enumerate() {
            if let Some(k) = k {
                counts[idx * m + k] = 1;
            }
        }
        Self { n, m, counts }
    }

    /// `self * rhs` for a monomial `rhs`.
    fn mul_monomials(&self, rhs: &[Option<usize>]) -> Self {
        let (n, m) = (self.n, self.m);
        let mut counts = vec![0; n * n * m];
        for r in 0..n {
            for k in 0..n {
                let a = &self.counts[(r * n + k) * m..(r * n + k + 1) * m];
                if a.iter().all(|&x| x == 0) {
                    continue;
                }
                for c in 0..n {
                    let Some(e) = rhs[k * n + c] else { continue };
                    let out = &mut counts[(r * n + c) * m..(r * n + c + 1) * m];
                    for (j, &x) in a.iter().enumerate() {
                        out[(j + e) % m] += x;
                    }
                }
            }
        }
        Self { n, m, counts }
    }

    fn entry(&self, r: usize, c: usize, scale: &Rational) -> CyclotomicNumber {
        let m = self.m as u64;
        let base = (r * self.n + c) * self.m;
        let mut x = CyclotomicNumber::zero(m);
        for (k, &count) in self.counts[base..base + self.m].iter().enumerate() {
            if count != 0 {
                x = x.add(&CyclotomicNumber::root_of_unity(m, k as i64).scale(&rat_int(count)));
            }
        }
        x.scale(scale)
    }
}

fn c6_weil() -> Outcome {
    run(None, |fail| {
        let list: Vec<_> = pairs(12).into_iter().filter(|(n, np)| n * np <= 12).collect();
        let guard = big_guard();
        for &(n, np) in &list {
            let f = form(n, np);
            let size = f.order() as usize;
            let m = n as u64;
            let s = weil_s(&f, &guard).unwrap();
            let t = weil_t(&f, &guard).unwrap();
            let scale = rat(1, n * np);
            let (Some(s_mono), Some(t_mono)) = (as_monomials(&s, m, &scale), as_monomials(&t, m, &rat_int(1))) else {
                fail.push(format!("({n},{np}) entries"));
                continue;
            };
            // S T is again monomial since T is diagonal
            let st_mono: Vec<Option<usize>> = (0..size * size)
                .map(|idx| match (s_mono[idx], t_mono[(idx % size) * (size + 1)]) {
                    (Some(a), Some(b)) => Some((a + b) % n as usize),
                    _ => None,
                })
                .collect();
            let s2 = RingMatrix::from_monomials(size, n as usize, &s_mono).mul_monomials(&s_mono);
            let st3 = RingMatrix::from_monomials(size, n as usize, &st_mono)
                .mul_monomials(&st_mono)
                .mul_monomials(&st_mono);
            let (scale2, scale3) = (&scale * &scale, &scale * &scale * &scale);
            let (mut s2_ok, mut st3_ok) = (true, true);
            for i in 0..size {
                for j in 0..size {
                    let lhs = s2.entry(i, j, &scale2);
                    let neg = f.neg(&f.element_at(j)) == f.element_at(i);
                    let want = if neg { CyclotomicNumber::one(m) } else { CyclotomicNumber::zero(m) };
                    s2_ok &= lhs == want;
                    st3_ok &= st3.entry(i, j, &scale3) == lhs;
                }
            }
            if !s2_ok {
                fail.push(format!("({n},{np}) S^2"));
            }
            if !st3_ok {
                fail.push(format!("({n},{np}) (ST)^3"));
            }
            for h in f.enumerate_self_dual_isotropic(&guard).unwrap() {
                if !is_invariant(&char_vector(&h)) {
                    fail.push(format!("({n},{np}) {h}"));
                }
            }
        }
        list.len()
    })
}

fn c7_eta_identity() -> Outcome {
    run(Some(60), |fail| {
        let list = [(2, 1), (3, 1), (5, 1), (2, 2)];
        for (p, r) in list {
            let rep = eta_identity_check(p, r, 50).unwrap();
            if !rep.holds || rep.constant != rep.expected_constant {
                fail.push(format!("({p},{r})"));
            }
        }
        list.len()
    })
}

fn c8_relation_lift() -> Outcome {
    run(None, |fail| {
        let list = [(2, 1, 1), (3, 1, 1), (2, 2, 1)];
        for (p, r, rp) in list {
            if !relation_lift_check(p, r, rp, 30, PsiConvention::Consistent).unwrap() {
                fail.push(format!("({p},{r},{rp})"));
            }
        }
        list.len()
    })
}

fn c9_cross_validation() -> Outcome {
    run(None, |fail| {
        let mut checked = 0;
        let guard = Guard::default();
        for (n, np) in [(1, 1), (2, 1), (4, 1), (2, 2)] {
            let f = form(n, np);
            for (h, w) in enumerate_types(&f) {
                checked += 1;
                if cross_validate_boundary(&f, &h, &guard, PsiConvention::Consistent).unwrap().constant.is_none() {
                    fail.push(format!("({n},{np}) {w}"));
                }
            }
        }
        checked
    })
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = loop {
        let v = rng.gen_range(-9i64..=9);
        if v != 0 {
            break v;
        }
    };
    rat(num, rng.gen_range(1..=4))
}

fn c10_converse() -> Outcome {
    run(Some(60), |fail| {
        let guard = Guard::default();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut checked = 0;
        // classes whose type is shared with another class admit type-inconstant perturbations
        let mut perturbable = Vec::new();
        for (n, np) in [(1, 1), (2, 1), (4, 1), (2, 2), (3, 3), (4, 2), (6, 1), (6, 2)] {
            let f = form(n, np);
            let classes = cusp_classes(&f, &guard).unwrap();
            let types: Vec<FqmSubgroup> = enumerate_types(&f).into_iter().map(|(h, _)| h).collect();
            for h in &types {
                checked += 1;
                let d = special_divisor(&f, &classes, h).unwrap();
                let Some(cert) = is_special(&d, &classes).unwrap() else {
                    fail.push(format!("({n},{np}) Z({h}) rejected"));
                    continue;
                };
                let back = boundary_divisor_of_invariant(&cert.invariant_vector, &types).unwrap();
                if Some(back) != type_view(&d, &classes).unwrap() {
                    fail.push(format!("({n},{np}) Z({h}) not reproduced"));
                }
            }
            let shared: Vec<usize> = (0..classes.len())
                .filter(|&i| classes.iter().enumerate().any(|(j, c)| j != i && c.cusp_type == classes[i].cusp_type))
                .collect();
            if !shared.is_empty() {
                perturbable.push((f, classes, types, shared));
            }
        }
        for k in 0..50 {
            let (f, classes, types, shared) = &perturbable[k % perturbable.len()];
            let h = &types[rng.gen_range(0..types.len())];
            let s = classes[shared[rng.gen_range(0..shared.len())]].representative;
            let bump = BoundaryDivisor::from_entries(*f, classes, [(s, random_rational(&mut rng))]).unwrap();
            let d = special_divisor(f, classes, h).unwrap().add(&bump).unwrap();
            checked += 1;
            if is_special(&d, classes).unwrap().is_some() {
                fail.push(format!("({},{}) perturbation {k} accepted", f.n(), f.nprime()));
            }
        }
        // type-constant but unbalanced: the indicator of a single type at N = N' = 2
        let f = form(2, 2);
        let classes = cusp_classes(&f, &guard).unwrap();
        for (t, w) in enumerate_types(&f) {
            let entries = classes.iter().filter(|c| c.cusp_type == t).map(|c| (c.representative, rat_int(1)));
            let d = BoundaryDivisor::from_entries(f, &classes, entries).unwrap();
            checked += 1;
            let report = characterization_check(&d, &classes).unwrap();
            if report.holds() || is_special(&d, &classes).unwrap().is_some() {
                fail.push(format!("(2,2) unbalanced indicator of {w} accepted"));
            }
        }
        checked
    })
}

fn c11_level_one() -> Outcome {
    run(None, |fail| {
        let guard = Guard::default();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
        let mut checked = 0;
        for n in [2, 4, 12] {
            let f = form(n, 1);
            let classes = cusp_classes(&f, &guard).unwrap();
            let agree = |d: &BoundaryDivisor| {
                characterization_check(d, &classes).unwrap().holds() == is_special(d, &classes).unwrap().is_some()
            };
            // basis of the type-constant divisors: indicators of the types
            for (t, w) in enumerate_types(&f) {
                let entries = classes.iter().filter(|c| c.cusp_type == t).map(|c| (c.representative, rat_int(1)));
                let d = BoundaryDivisor::from_entries(f, &classes, entries).unwrap();
                checked += 1;
                if !agree(&d) {
                    fail.push(format!("({n},1) indicator of {w}"));
                }
            }
            // and the divisors that put weight on one class only
            for c in &classes {
                let d = BoundaryDivisor::from_entries(f, &classes, [(c.representative, rat_int(1))]).unwrap();
                checked += 1;
                if !agree(&d) {
                    fail.push(format!("({n},1) point {}", c.representative));
                }
            }
        }
        let mut negatives = 0;
        while negatives < 20 {
            let n = [2, 4, 12][negatives % 3];
            let f = form(n, 1);
            let classes = cusp_classes(&f, &guard).unwrap();
            let entries: Vec<_> = classes.iter().map(|c| (c.representative, random_rational(&mut rng))).collect();
            let d = BoundaryDivisor::from_entries(f, &classes, entries).unwrap();
            if characterization_check(&d, &classes).unwrap().holds() {
                continue;
            }
            negatives += 1;
            checked += 1;
            if is_special(&d, &classes).unwrap().is_some() {
                fail.push(format!("({n},1) random negative {negatives} accepted"));
            }
        }
        checked
    })
}

/// Failures explained by the analysis of the mixed-star cusps, the squarefree criterion and
/// the eta identity at `r >= 2`.
fn predicted(criterion: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    match criterion {
        1 => {
            for (n, np) in pairs(24) {
                if omega(np) >= 2 {
                    let got = enumerate_types(&form(n, np)).len();
                    out.insert(format!("({n},{np}) {got} vs {}", types_count_formula(n, np).unwrap()));
                }
            }
        }
        3 => {
            for (n, np) in pairs(24) {
                if omega(np) >= 2 {
                    let span = types_span(&form(n, np)).unwrap().dimension;
                    out.insert(format!("({n},{np}) span {span} vs formula {}", types_span_dimension_formula(n, np).unwrap()));
                }
            }
            out.insert(format!("example (6,6) {} vs 35", types_span(&form(6, 6)).unwrap().dimension));
        }
        5 => {
            for (n, strict) in [(1, false), (2, false), (3, false), (5, false), (6, false), (12, false), (4, true), (8, true), (9, true)] {
                for np in divisors(n) {
                    let f = form(n, np);
                    if f.order() <= 1296 && types_span_everything(n, np) == strict {
                        let span = types_span(&f).unwrap().dimension;
                        let inv = invariant_space_dim(&f, &Guard::new(1296)).unwrap();
                        out.insert(format!("({n},{np}) span {span} invariants {inv}"));
                    }
                }
            }
        }
        7 => {
            out.insert("(2,2)".to_string());
        }
        _ => {}
    }
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("type counting", c1_type_count),
        ("self-duality", c2_self_duality),
        ("span dimension", c3_span_dimension),
        ("relation kernel", c4_relation),
        ("squarefree criterion", c5_squarefree),
        ("Weil sanity", c6_weil),
        ("eta identity", c7_eta_identity),
        ("relation lift", c8_relation_lift),
        ("boundary cross-validation", c9_cross_validation),
        ("converse at divisor level", c10_converse),
        ("N'=1 characterization", c11_level_one),
    ];
    // ACCEPTANCE_ONLY=3,7 runs a subset
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|k| k.trim().parse().ok()).collect());
    let mut unexpected = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let k = i + 1;
        if only.as_ref().is_some_and(|ks| !ks.contains(&k)) {
            continue;
        }
        let o = &criterion();
        let over_budget = o.budget.is_some_and(|b| o.elapsed > b);
        let pass = o.failures.is_empty() && !over_budget;
        let mut line = format!(
            "criterion {k:>2} {:<27} {}  ({} checked, {:.1?})",
            name,
            if pass { "PASS" } else { "FAIL" },
            o.checked,
            o.elapsed
        );
        if over_budget {
            line.push_str(&format!(" over budget {:?}", o.budget.unwrap()));
            unexpected += 1;
        }
        let want = predicted(k);
        if !o.failures.is_empty() {
            let shown: Vec<&str> = o.failures.iter().take(4).map(String::as_str).collect();
            line.push_str(&format!(" failing {}: {}", o.failures.len(), shown.join("; ")));
            if o.failures.len() > 4 {
                line.push_str("; ...");
            }
        }
        if o.failures == want {
            if !want.is_empty() {
                line.push_str(" [as predicted]");
            }
        } else {
            unexpected += 1;
            let extra: Vec<_> = o.failures.difference(&want).collect();
            let missing: Vec<_> = want.difference(&o.failures).collect();
            line.push_str(&format!(" [UNEXPECTED: extra {extra:?}, missing {missing:?}]"));
        }
        println!("{line}");
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria deviate from the predicted outcome");
        ExitCode::FAILURE
    }
}
