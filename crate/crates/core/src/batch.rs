//! Corpus-level drivers. Programs are independent, so a sweep is a plain
//! data-parallel map; each analysis itself stays sequential.
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] fans out
//! over rayon's pool; without it every sweep runs sequentially.

use crate::interproc::{run_analysis, AnalysisError, AnalysisResult, AnalysisVariant};
use crate::ir::Program;
use crate::oracle::{
    corpus_program, diff_alias, eval_naive_with, DiffReport, OracleError, RuleSet,
    DEFAULT_FACT_LIMIT,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Whether this build can actually run in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Order-preserving map over `items`.
pub fn map<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

pub fn analyze_all(
    programs: &[Program],
    variant: AnalysisVariant,
    exec: Execution,
) -> Vec<Result<AnalysisResult, AnalysisError>> {
    map(programs, exec, |p| run_analysis(p, variant))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepOutcome {
    Agree,
    Mismatch(DiffReport),
    Engine(AnalysisError),
    Oracle(OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepItem {
    pub seed: u64,
    pub outcome: SweepOutcome,
}

/// Engine against the naive fixpoint on one program.
pub fn compare_with_oracle(
    p: &Program,
    variant: AnalysisVariant,
    rs: RuleSet,
    fact_limit: usize,
) -> SweepOutcome {
    let engine = match run_analysis(p, variant) {
        Ok(r) => r,
        Err(e) => return SweepOutcome::Engine(e),
    };
    match eval_naive_with(p, rs, fact_limit) {
        Ok(fb) => {
            let d = diff_alias(&engine.alias_pairs(), &fb.alias_pairs());
            if d.is_empty() {
                SweepOutcome::Agree
            } else {
                SweepOutcome::Mismatch(d)
            }
        }
        Err(e) => SweepOutcome::Oracle(e),
    }
}

/// Differential sweep over corpus programs `seeds`.
pub fn oracle_sweep(
    seeds: std::ops::Range<u64>,
    variant: AnalysisVariant,
    exec: Execution,
) -> Vec<SweepItem> {
    let rs = RuleSet::for_variant(variant);
    let seeds: Vec<u64> = seeds.collect();
    map(&seeds, exec, |&seed| {
        let p = corpus_program(seed);
        let outcome = match rs {
            Some(rs) => compare_with_oracle(&p, variant, rs, DEFAULT_FACT_LIMIT),
            None => match run_analysis(&p, variant) {
                Ok(_) => SweepOutcome::Agree,
                Err(e) => SweepOutcome::Engine(e),
            },
        };
        SweepItem { seed, outcome }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::gen_program;

    #[test]
    fn parallel_and_sequential_agree() {
        let programs: Vec<Program> = (0..12).map(|s| gen_program(s, 3, 12)).collect();
        let par = analyze_all(&programs, AnalysisVariant::PfsDsa, Execution::Parallel);
        let seq = analyze_all(&programs, AnalysisVariant::PfsDsa, Execution::Sequential);
        for (a, b) in par.iter().zip(&seq) {
            assert_eq!(
                a.as_ref().unwrap().alias_pairs(),
                b.as_ref().unwrap().alias_pairs()
            );
        }
    }

    #[test]
    fn sweep_preserves_seed_order() {
        let items = oracle_sweep(5..9, AnalysisVariant::SteensCi, Execution::Parallel);
        assert_eq!(
            items.iter().map(|i| i.seed).collect::<Vec<_>>(),
            vec![5, 6, 7, 8]
        );
        assert!(items.iter().all(|i| i.outcome == SweepOutcome::Agree));
    }
}
