use pta_core::interproc::{run_analysis, AnalysisVariant};
use pta_core::oracle::{corpus_program, diff_alias, eval_naive, RuleSet};

fn agree(variant: AnalysisVariant, seeds: std::ops::Range<u64>) {
    let rs = RuleSet::for_variant(variant).expect("oracle covers variant");
    for seed in seeds {
        let p = corpus_program(seed);
        let engine = run_analysis(&p, variant).expect("engine");
        let oracle = eval_naive(&p, rs).expect("oracle");
        let d = diff_alias(&engine.alias_pairs(), &oracle.alias_pairs());
        assert!(
            d.is_empty(),
            "{} seed {seed}\n{}\n{p}",
            variant.name(),
            d.render(|r| engine.reg_name(r))
        );
    }
}

#[test]
fn andersen_agrees() {
    agree(AnalysisVariant::AndersenCi, 1000..1100);
}

#[test]
fn steens_agrees() {
    agree(AnalysisVariant::SteensCi, 1000..1100);
}

#[test]
fn dsa_agrees() {
    agree(AnalysisVariant::Dsa, 1000..1060);
}

#[test]
fn pfs_agrees() {
    agree(AnalysisVariant::PfsDsa, 1000..1060);
}

#[test]
fn tea_agrees() {
    agree(AnalysisVariant::TeaDsa, 1000..1030);
}
