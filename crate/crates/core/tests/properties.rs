use proptest::prelude::*;
use pta_core::checker::check_overflow;
use pta_core::domain::{formals_for, objects_for_alloc, AbstractObject, Owner, PointsToGraph};
use pta_core::interproc::{
    run_analysis, run_analysis_with, AnalysisResult, AnalysisVariant, Options, Phase,
};
use pta_core::ir::{build_call_graph, parse_program, LInstr, Lowered, Program};
use pta_core::lattice::TypeLattice;
use pta_core::local::{run_local, saturate_local, seed_formals, LocalConfig};
use pta_core::oracle::{eval_naive, gen_program, RuleSet};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use AnalysisVariant::*;

fn programs() -> impl Strategy<Value = Program> {
    (any::<u64>(), 1usize..=4, 4usize..=24).prop_map(|(seed, f, n)| gen_program(seed, f, n))
}

fn cfg() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn run(p: &Program, v: AnalysisVariant) -> AnalysisResult {
    run_analysis(p, v).unwrap_or_else(|e| panic!("{v}: {e}\n{p}"))
}

/// Alias pairs by register name, so results over differently lowered
/// programs compare.
fn named_pairs(r: &AnalysisResult) -> BTreeSet<(String, String)> {
    r.alias_pairs()
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (r.reg_name(a), r.reg_name(b));
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

fn named_points_to(r: &AnalysisResult) -> BTreeSet<(String, AbstractObject)> {
    r.facts()
        .values()
        .flat_map(|f| f.points_to.iter().map(|&(x, o)| (r.reg_name(x), o)))
        .collect()
}

fn shuffled(p: &Program, seed: u64) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut functions = p.functions().to_vec();
    for f in &mut functions {
        f.body.shuffle(&mut rng);
    }
    Program::new(functions)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn print_parse_round_trip(p in programs()) {
        let again = parse_program(&p.to_string()).unwrap();
        prop_assert_eq!(&again, &p);
        prop_assert_eq!(again.to_string(), p.to_string());
    }

    #[test]
    fn reverse_topological_order_visits_callees_first(p in programs()) {
        let cg = build_call_graph(&p);
        let order = cg.reverse_topo_order();
        let pos = |f| order.iter().position(|&g| g == f).unwrap();
        for e in cg.edges() {
            prop_assert!(pos(e.callee) < pos(e.caller));
        }
    }

    #[test]
    fn body_permutation_changes_nothing(p in programs(), seed in any::<u64>()) {
        let q = shuffled(&p, seed);
        for v in AnalysisVariant::ALL {
            let (a, b) = (run(&p, v), run(&q, v));
            prop_assert_eq!(named_pairs(&a), named_pairs(&b), "{}", v);
            prop_assert_eq!(named_points_to(&a), named_points_to(&b), "{}", v);
            prop_assert_eq!(check_overflow(&a).alias_pairs(), check_overflow(&b).alias_pairs());
        }
    }

    #[test]
    fn unified_registers_and_slots_have_one_target(p in programs()) {
        for v in [SteensCi, Dsa, PfsDsa, TeaDsa] {
            let r = run(&p, v);
            let lattice = TypeLattice::standard();
            for g in r.graphs() {
                for x in g.registers() {
                    prop_assert!(g.pts(x).len() <= 1);
                }
                for n in g.groups() {
                    let slots = g.slots(n);
                    for (i, (t, ts)) in slots.iter().enumerate() {
                        prop_assert!(ts.len() <= 1);
                        for (u, us) in &slots[i + 1..] {
                            if lattice.compat(*t, *u) {
                                prop_assert_eq!(ts, us);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn erase_tags_is_idempotent_and_monotone(p in programs()) {
        let r = run(&p, TeaDsa);
        let once = r.erase_tags();
        let twice = once.erase_tags();
        prop_assert!(r.alias_pairs().is_subset(&once.alias_pairs()));
        prop_assert_eq!(once.facts(), twice.facts());
    }

    #[test]
    fn pre_materializing_cells_changes_nothing(p in programs()) {
        let low = Lowered::new(&p);
        for cfg in [LocalConfig::INCLUSION, LocalConfig::STEENS, LocalConfig::TYPED] {
            for func in &low.funcs {
                let lazy = run_local(&low, func.id, cfg);
                let mut eager = PointsToGraph::new(Owner::Function(func.id), cfg.mode(TypeLattice::standard()));
                for o in formals_for(func.id, func.formals.len()).objects {
                    eager.node(o);
                }
                for i in &func.body {
                    if let LInstr::Alloc { id, .. } = *i {
                        let o = objects_for_alloc(id);
                        eager.node(o);
                        eager.node(o.sibling());
                    }
                }
                seed_formals(func, &mut eager);
                saturate_local(func, &mut eager, cfg.typed);
                prop_assert_eq!(eager.facts(), lazy.facts());
                let parts = |g: &PointsToGraph| g.groups().into_iter().map(|n| g.group_objects(n)).collect::<BTreeSet<_>>();
                prop_assert_eq!(parts(&eager), parts(&lazy));
            }
        }
    }

    #[test]
    fn degenerate_lattice_reproduces_untyped(p in programs()) {
        let typed = run_analysis_with(&p, TeaDsa, Options { lattice: TypeLattice::degenerate() }).unwrap();
        let untyped = run(&p, PfsDsa);
        prop_assert_eq!(typed.erase_tags().facts(), untyped.facts());
        prop_assert_eq!(typed.alias_pairs(), untyped.alias_pairs());
    }

    #[test]
    fn typed_local_is_at_least_as_precise(p in programs()) {
        let low = Lowered::new(&p);
        for func in &low.funcs {
            let typed = run_local(&low, func.id, LocalConfig::TYPED);
            let untyped = run_local(&low, func.id, LocalConfig::STEENS);
            prop_assert!(typed.alias_pairs().is_subset(&untyped.alias_pairs()));
        }
    }

    #[test]
    fn oracle_rule_sets_grow(p in programs()) {
        let pts = |rs| eval_naive(&p, rs).unwrap().points_to();
        let (i, f, s) = (pts(RuleSet::Inclusion), pts(RuleSet::InclusionFields), pts(RuleSet::Steens));
        prop_assert!(i.is_subset(&f));
        prop_assert!(f.is_subset(&s));
    }

    #[test]
    fn precision_chain(p in programs()) {
        let tea = run(&p, TeaDsa).erase_tags();
        let pfs = run(&p, PfsDsa);
        let dsa = run(&p, Dsa);
        let legacy = run(&p, DsaLegacyTd);
        for f in p.ids() {
            prop_assert!(tea.alias_pairs_in(f).is_subset(&pfs.alias_pairs_in(f)));
            prop_assert!(pfs.alias_pairs_in(f).is_subset(&dsa.alias_pairs_in(f)));
            prop_assert!(dsa.alias_pairs_in(f).is_subset(&legacy.alias_pairs_in(f)));
        }
        prop_assert!(run(&p, AndersenCi).alias_pairs().is_subset(&run(&p, SteensCi).alias_pairs()));
    }

    #[test]
    fn phases_are_idempotent(p in programs()) {
        for v in [Dsa, DsaLegacyTd, PfsDsa, TeaDsa] {
            let r = run(&p, v);
            for phase in [Phase::Local, Phase::BottomUp, Phase::TopDown] {
                prop_assert_eq!(r.rerun_phase(phase).unwrap(), 0, "{} {:?}", v, phase);
            }
        }
    }

    #[test]
    fn checker_follows_precision(p in programs()) {
        let chain = [AndersenCi, SteensCi];
        let cs = [TeaDsa, PfsDsa, Dsa, DsaLegacyTd];
        for pair in chain.windows(2).chain(cs.windows(2)) {
            let (a, b) = (check_overflow(&run(&p, pair[0])), check_overflow(&run(&p, pair[1])));
            prop_assert!(a.alias_pairs().is_subset(&b.alias_pairs()), "{} vs {}", pair[0], pair[1]);
            prop_assert!(a.checks <= b.checks, "{} vs {}", pair[0], pair[1]);
            for x in &a.aliases {
                prop_assert!(a.checked.contains(&x.instr));
            }
        }
    }
}
