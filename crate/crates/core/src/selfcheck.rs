//! A quick run of the library's invariants at small bounds.
//!
//! Each check reports pass, fail or inconclusive (a minor search ran out of
//! budget). The full-size versions live in the test suite.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assoc::{family_instance, is_quasi_associative};
use crate::classes::{member, separating_rank, validate_table, ClassId, Context, InclusionTable, Rank};
use crate::classify::{classify_interval, validate_minimal_table, VerdictKind};
use crate::families::{placement_claims, quasi_monadic_lattice, Family, FamilySpec};
use crate::function::BooleanFunction;
use crate::hypergraph::{all_hypergraphs, function_of, hypergraph_of, HypergraphError};
use crate::minor::{minor_leq_budget, verify_antichain, MinorError, Verdict};
use crate::monoid::{assoc_lemma_check, compose_classes, random_class, CappedClass};
use crate::parse::{format_function, parse_function, Style};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfCheckReport {
    pub checks: Vec<CheckResult>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn inconclusive(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Inconclusive)
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }
}

#[derive(Debug, Clone)]
pub struct SelfCheckOptions {
    /// Node budget for each minor search.
    pub budget: u64,
    /// The inclusion table to validate; swapped out by negative controls.
    pub table: InclusionTable,
}

impl Default for SelfCheckOptions {
    fn default() -> Self {
        SelfCheckOptions {
            budget: crate::minor::DEFAULT_BUDGET,
            table: InclusionTable::post_lattice(),
        }
    }
}

type Outcome = Result<Result<(), String>, Inconclusive>;

struct Inconclusive(String);

impl From<MinorError> for Inconclusive {
    fn from(e: MinorError) -> Self {
        Inconclusive(e.to_string())
    }
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn small_functions(max_arity: usize) -> Vec<BooleanFunction> {
    (1..=max_arity).flat_map(BooleanFunction::all_of_arity).collect()
}

fn round_trips() -> Outcome {
    for f in small_functions(3) {
        for style in [Style::Hex, Style::Dnf] {
            let text = format_function(&f, style);
            match parse_function(&text) {
                Ok(g) if g == f => {}
                Ok(_) => return Ok(Err(format!("{f} printed as {text}"))),
                Err(e) => return Ok(Err(format!("{text}: {e}"))),
            }
        }
        if BooleanFunction::from_zhegalkin(&f.zhegalkin()) != f || f.dual().dual() != f {
            return Ok(Err(format!("transform round trip failed on {f}")));
        }
    }
    Ok(Ok(()))
}

fn antichain(budget: u64) -> Outcome {
    let fs: Vec<BooleanFunction> = (4..=6)
        .map(|n| FamilySpec::new(Family::F, n).build().expect("in range"))
        .collect();
    let report = verify_antichain(&fs, budget)?;
    match report.verdict {
        Verdict::True => Ok(Ok(())),
        Verdict::False => Ok(Err(format!("{:?}", report.first_violation()))),
        Verdict::Inconclusive => Err(Inconclusive("budget exhausted".into())),
    }
}

fn catalog(table: &InclusionTable) -> Outcome {
    let report = validate_table(table, 4, 3).map_err(|e| Inconclusive(e.to_string()))?;
    Ok(ensure(report.passed(), || {
        format!(
            "{} unsound, {} incomplete; first unsound {:?}, first incomplete {:?}",
            report.unsound.len(),
            report.incomplete.len(),
            report.unsound.first(),
            report.incomplete.first()
        )
    }))
}

fn class_transport() -> Outcome {
    let classes = ClassId::catalog(3);
    for f in small_functions(3) {
        let d = f.dual();
        for &c in &classes {
            let m = member(&f, c).expect("small arity");
            if m != member(&d, c.dual()).expect("small arity") {
                return Ok(Err(format!("duality: {f} in {c}")));
            }
            if let ClassId::Sep { kind, context, level } = c {
                let base = member(&f, ClassId::sep(kind, Context::All, level)).expect("small arity");
                let ctx = match context {
                    Context::All => true,
                    Context::Tc => member(&f, ClassId::Tc).expect("small arity"),
                    Context::M => member(&f, ClassId::M).expect("small arity"),
                    Context::Mc => member(&f, ClassId::Mc).expect("small arity"),
                };
                if m != (base && ctx) {
                    return Ok(Err(format!("meet: {f} in {c}")));
                }
            }
        }
        if let Rank::Finite(r) = separating_rank(&f, true).expect("small arity") {
            for k in 2..=r + 1 {
                if member(&f, ClassId::u(k)).expect("small arity") != (k <= r) {
                    return Ok(Err(format!("rank chain: {f} at U{k}")));
                }
            }
        }
    }
    Ok(Ok(()))
}

fn minor_closure() -> Outcome {
    let classes = ClassId::catalog(3);
    for f in small_functions(3) {
        let inside: Vec<ClassId> = classes.iter().copied().filter(|&c| member(&f, c).expect("small arity")).collect();
        let n = f.arity();
        for m in 1..=n {
            let mut bad = None;
            crate::monoid::for_each_map(n, m, |map| {
                if bad.is_none() {
                    let map1: Vec<usize> = map.iter().map(|v| v + 1).collect();
                    let g = f.substitute(&map1, m).expect("valid map");
                    if let Some(c) = inside.iter().find(|&&c| !member(&g, c).expect("small arity")) {
                        bad = Some(format!("{g} is a minor of {f} but not in {c}"));
                    }
                }
            });
            if let Some(b) = bad {
                return Ok(Err(b));
            }
        }
    }
    Ok(Ok(()))
}

fn placements() -> Outcome {
    let failing: Vec<String> = placement_claims(6)
        .iter()
        .filter(|p| p.label != "G-limit")
        .filter_map(|p| {
            let check = p.check().expect("small arity");
            (!check.holds()).then(|| format!("{}{}", if p.dual { "dual " } else { "" }, p.spec))
        })
        .collect();
    Ok(ensure(failing.is_empty(), || failing.join(", ")))
}

fn hypergraphs(budget: u64) -> Outcome {
    let graphs: Vec<_> = (1..=3).flat_map(|n| all_hypergraphs(n, 2)).collect();
    for g in &graphs {
        let f = function_of(g);
        if f.constant_value() != Some(true) && function_of(&hypergraph_of(&f).expect("monotone")) != f {
            return Ok(Err(format!("round trip failed on {g}")));
        }
        for h in &graphs {
            let hom = match crate::hypergraph::edge_surjective_hom_budget(g, h, budget) {
                Ok(s) => s.witness,
                Err(HypergraphError::Inconclusive { nodes }) => {
                    return Err(Inconclusive(format!("hom search stopped after {nodes} nodes")))
                }
                Err(e) => return Ok(Err(e.to_string())),
            };
            if hom.is_some() && minor_leq_budget(&function_of(h), &f, budget)?.witness.is_none() {
                return Ok(Err(format!("hom {g} -> {h} without a minor")));
            }
        }
    }
    Ok(Ok(()))
}

fn associativity() -> Outcome {
    let specs = [
        FamilySpec::new(Family::F, 5),
        FamilySpec::new(Family::G, 5),
        FamilySpec::new(Family::U, 5),
        FamilySpec::new(Family::Tu, 5),
        FamilySpec::new(Family::H, 5),
        FamilySpec::big_g(4, 4),
        FamilySpec::new(Family::T, 7),
        FamilySpec::new(Family::S, 7),
    ];
    for spec in &specs {
        let inst = family_instance(spec).map_err(|e| Inconclusive(e.to_string()))?;
        if !inst.holds() {
            return Ok(Err(format!("{spec}: computed {:?}", inst.computed)));
        }
    }
    for f in small_functions(3) {
        if f.essential_arity() <= 1 && !is_quasi_associative(&f).expect("small arity") {
            return Ok(Err(format!("{f} is quasi-monadic but not quasi-associative")));
        }
    }
    Ok(Ok(()))
}

fn monoid_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cap = 2;
    let proj = CappedClass::closure(&[BooleanFunction::projection(1, 1).expect("x1")], cap).expect("cap");
    for _ in 0..20 {
        let i = random_class(&mut rng, cap).expect("cap");
        let j = random_class(&mut rng, cap).expect("cap");
        let k = random_class(&mut rng, cap).expect("cap");
        let r = assoc_lemma_check(&i, &j, &k).expect("cap");
        if !r.subset_holds {
            return Ok(Err("(IJ)K not contained in I(JK)".into()));
        }
        if compose_classes(&i, &proj).expect("cap") != i || compose_classes(&proj, &i).expect("cap") != i {
            return Ok(Err("projection class is not an identity".into()));
        }
    }
    let lattice = quasi_monadic_lattice(3).expect("cap");
    Ok(ensure(lattice.len() == 16, || format!("{} quasi-monadic classes", lattice.len())))
}

fn classifier() -> Outcome {
    let failing: Vec<String> = validate_minimal_table(3)
        .map_err(|e| Inconclusive(e.to_string()))?
        .into_iter()
        .filter(|c| !c.passed())
        .map(|c| format!("<{}, {}>", c.entry.lower, c.entry.upper))
        .collect();
    if !failing.is_empty() {
        return Ok(Err(format!("table entries failing: {}", failing.join(", "))));
    }
    let cat = ClassId::catalog(3);
    for &a in &cat {
        for &b in &cat {
            let v = classify_interval(a, b).map_err(|e| Inconclusive(e.to_string()))?;
            let d = classify_interval(a.dual(), b.dual()).map_err(|e| Inconclusive(e.to_string()))?;
            if v.kind != d.kind {
                return Ok(Err(format!("duality breaks on <{a}, {b}>")));
            }
            if (v.kind == VerdictKind::Uncountable) != v.witness.is_some() {
                return Ok(Err(format!("no minimal interval inside <{a}, {b}>")));
            }
        }
    }
    let v = classify_interval(ClassId::Empty, ClassId::Omega1).map_err(|e| Inconclusive(e.to_string()))?;
    Ok(ensure(v.kind == VerdictKind::Finite(Some(16)), || format!("<Empty, Omega1> is {}", v.kind)))
}

/// Runs every check in a fixed order.
pub fn run(options: &SelfCheckOptions) -> SelfCheckReport {
    let budget = options.budget;
    let checks: Vec<(&'static str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("core.round_trips", Box::new(round_trips)),
        ("minor.antichain_f4_f6", Box::new(move || antichain(budget))),
        ("classes.catalog_table", Box::new(|| catalog(&options.table))),
        ("classes.duality_meet_rank", Box::new(class_transport)),
        ("classes.minor_closure", Box::new(minor_closure)),
        ("families.placements", Box::new(placements)),
        ("hypergraph.hom_gives_minor", Box::new(move || hypergraphs(budget))),
        ("assoc.instances_and_vacuity", Box::new(associativity)),
        ("monoid.laws_cap2", Box::new(monoid_laws)),
        ("classify.table_and_symmetry", Box::new(classifier)),
    ];
    let results = checks
        .into_iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let (status, detail) = match check() {
                Ok(Ok(())) => (Status::Pass, String::new()),
                Ok(Err(d)) => (Status::Fail, d),
                Err(Inconclusive(d)) => (Status::Inconclusive, d),
            };
            CheckResult {
                name,
                status,
                detail,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();
    SelfCheckReport { checks: results }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_build_passes() {
        let report = run(&SelfCheckOptions::default());
        for c in &report.checks {
            assert_eq!(c.status, Status::Pass, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn corrupted_table_fails() {
        let mut table = InclusionTable::post_lattice();
        table.edges.push((ClassId::M, ClassId::L));
        let report = run(&SelfCheckOptions {
            table,
            ..Default::default()
        });
        let c = report.checks.iter().find(|c| c.name == "classes.catalog_table").unwrap();
        assert_eq!(c.status, Status::Fail);
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let report = run(&SelfCheckOptions {
            budget: 1,
            ..Default::default()
        });
        assert!(report.inconclusive());
        assert!(!report.failed());
    }
}
