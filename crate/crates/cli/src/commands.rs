use std::io::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use rainbow_core::coloring::{
    all_pairs_c4, random_coloring, round_robin_coloring, xor_coloring, ColoringError, EdgeColoring,
};
use rainbow_core::constructions::{decompose_c4, three_trees, two_trees, ThreeTreeRoute, TwoTreeRoute};
use rainbow_core::format::{
    parse_coloring, parse_dot, parse_forest, write_coloring, write_dot, write_family, write_forest,
    FormatError,
};
use rainbow_core::latin::{disjoint_transversals, TransversalStrategy};
use rainbow_core::oracle::{
    brute_force_disjoint_trees, brute_force_partition, certify_family, OracleError, SearchBudget,
};
use rainbow_core::verify::{verify_family, verify_multicolored_spanning_tree, FamilyChecks};
use rainbow_core::{ahu_code, ColoredTree, ConstructionError};

use crate::report::RunReport;
use crate::Kind;

/// A report plus the artifact file contents, if the command produces one.
pub struct Output {
    pub report: RunReport,
    pub artifact: Option<String>,
}

impl Output {
    fn report_only(report: RunReport) -> Self {
        Output { report, artifact: None }
    }

    /// Writes the artifact to `out` or stdout. The report goes to stdout,
    /// or to stderr when stdout already carries the artifact.
    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        let report = self.report.to_json();
        match (&self.artifact, out) {
            (Some(text), Some(path)) => {
                std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
                print!("{report}");
            }
            (Some(text), None) => {
                print!("{text}");
                std::io::stdout().flush()?;
                eprint!("{report}");
            }
            (None, _) => print!("{report}"),
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_coloring(path: &Path) -> Result<EdgeColoring> {
    parse_coloring(&read(path)?).with_context(|| format!("parsing coloring {}", path.display()))
}

/// Plain forest format, or DOT when the text starts with `graph`.
fn read_forest(path: &Path) -> Result<Vec<ColoredTree>> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with("graph") { parse_dot(&text) } else { parse_forest(&text) };
    parsed.with_context(|| format!("parsing forest {}", path.display()))
}

fn certificate(
    phi: &EdgeColoring,
    trees: &[ColoredTree],
    partition: bool,
    isomorphic: bool,
) -> Result<(), &'static str> {
    if certify_family(phi, trees, partition, isomorphic) {
        Ok(())
    } else {
        Err("independent certificate rejected the family")
    }
}

/// Unsupported inputs become errors (exit 2); any other failure is recorded
/// as a failed check.
fn constructed<T>(report: &mut RunReport, result: Result<T, ConstructionError>) -> Result<Option<T>> {
    match result {
        Ok(t) => {
            report.check::<String>("construction", Ok(()));
            Ok(Some(t))
        }
        Err(
            e @ (ConstructionError::OrderTooSmall { .. }
            | ConstructionError::HypothesisViolated(_)
            | ConstructionError::Coloring(_)),
        ) => Err(e.into()),
        Err(e) => {
            report.check("construction", Err(e));
            Ok(None)
        }
    }
}

pub fn gen(order: usize, kind: Kind, seed: u64, steps: usize) -> Result<Output> {
    let mut report = RunReport::new("gen");
    report.param("order", order);
    let phi = match kind {
        Kind::Roundrobin => {
            report.param("kind", "roundrobin");
            if order % 2 == 1 {
                bail!("order {order} is odd");
            }
            round_robin_coloring(order / 2)?
        }
        Kind::Xor => {
            report.param("kind", "xor");
            xor_coloring(order)?
        }
        Kind::Random => {
            report.param("kind", "random").param("steps", steps);
            report.seed = Some(seed);
            random_coloring(order, seed, steps)?
        }
    };
    let text = write_coloring(&phi);
    let reparsed = parse_coloring(&text).map_err(|e| e.to_string()).and_then(|p| {
        if p == phi {
            Ok(())
        } else {
            Err("written coloring differs after parsing".to_string())
        }
    });
    let ok = report.check("proper coloring (re-parsed)", reparsed);
    report.detail("all_pairs_four_cycles", all_pairs_c4(&phi).holds());
    Ok(Output { report, artifact: ok.then_some(text) })
}

fn trees_instance(phi: &EdgeColoring, count: u8, report: &mut RunReport) -> Result<Option<Vec<ColoredTree>>> {
    let n = phi.order();
    report.param("order", n).param("count", count);
    let trees: Vec<ColoredTree> = if count == 2 {
        let Some(out) = constructed(report, two_trees(phi))? else {
            return Ok(None);
        };
        match &out.route {
            TwoTreeRoute::LongCycle(w) => {
                report.detail("case", "long-cycle").detail("witness", w.to_string());
            }
            TwoTreeRoute::AllFourCycles => {
                report.detail("case", "all-four-cycles");
            }
        }
        out.trees.to_vec()
    } else {
        let Some(out) = constructed(report, three_trees(phi))? else {
            return Ok(None);
        };
        match &out.route {
            ThreeTreeRoute::Selection(sel) => {
                report
                    .detail("case", "long-cycle")
                    .detail("witness", sel.witness.to_string())
                    .detail("selection", sel.to_string())
                    .detail("trace", out.trace.to_string());
                report.check("selection side conditions", sel.validate(phi));
            }
            ThreeTreeRoute::AllFourCycles => {
                report.detail("case", "all-four-cycles");
            }
        }
        if let Some(centers) = out.centers {
            let profiles = out.trees.iter().zip(centers).try_for_each(|(t, x)| {
                let p = t.depth_profile(x);
                if p == [1, n - 5, 4] {
                    Ok(())
                } else {
                    Err(format!("tree centered at {x} has depth profile {p:?}"))
                }
            });
            report.detail("centers", centers.to_vec());
            report.check("depth profile [1, N-5, 4] at each center", profiles);
        }
        out.trees.to_vec()
    };
    report.check(
        "rainbow spanning, edge-disjoint, isomorphic",
        verify_family(phi, &trees, FamilyChecks::disjoint_isomorphic()),
    );
    report.check("independent certificate", certificate(phi, &trees, false, true));
    report.detail("canonical_code", ahu_code(&trees[0]).to_string());
    Ok(Some(trees))
}

pub fn trees(input: &Path, count: u8) -> Result<Output> {
    let phi = read_coloring(input)?;
    let mut report = RunReport::new("trees");
    let trees = trees_instance(&phi, count, &mut report)?;
    Ok(Output { report, artifact: trees.map(|t| write_forest(&t)) })
}

/// Instances run in parallel; reports keep seed order.
pub fn trees_batch(count: u8, instances: usize, order: usize, seed: u64, steps: usize) -> Result<Output> {
    let mut report = RunReport::new("trees");
    report.seed = Some(seed);
    report.param("instances", instances).param("order", order).param("count", count).param("steps", steps);
    let runs: Vec<Result<RunReport>> = (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let phi = random_coloring(order, s, steps)?;
            let mut r = RunReport::new("trees");
            r.seed = Some(s);
            trees_instance(&phi, count, &mut r)?;
            Ok(r)
        })
        .collect();
    for run in runs {
        report.push_instance(run?);
    }
    let failed = report.instances.iter().filter(|r| !r.passed()).count();
    report.detail("failed_instances", failed);
    Ok(Output::report_only(report))
}

pub fn decompose(input: &Path) -> Result<Output> {
    let phi = read_coloring(input)?;
    let mut report = RunReport::new("decompose");
    report.param("order", phi.order());
    let Some(d) = constructed(&mut report, decompose_c4(&phi))? else {
        return Ok(Output::report_only(report));
    };
    report.detail("trees", d.trees.len()).detail("canonical_code", ahu_code(&d.trees[0]).to_string());
    report.check("partition into isomorphic rainbow spanning trees", d.verify(&phi));
    report.check("independent certificate", certificate(&phi, &d.trees, true, true));
    Ok(Output { report, artifact: Some(write_forest(&d.trees)) })
}

pub fn verify(
    coloring: &Path,
    forest: Option<&Path>,
    disjoint: bool,
    isomorphic: bool,
    partition: bool,
) -> Result<Output> {
    let mut report = RunReport::new("verify");
    report.param("disjoint", disjoint).param("isomorphic", isomorphic).param("partition", partition);
    let phi = match parse_coloring(&read(coloring)?) {
        Ok(phi) => phi,
        Err(FormatError::Coloring(
            e @ (ColoringError::NotProper { .. } | ColoringError::Asymmetric { .. }),
        )) => {
            report.check("proper coloring", Err(e));
            return Ok(Output::report_only(report));
        }
        Err(e) => return Err(e).with_context(|| format!("parsing coloring {}", coloring.display())),
    };
    report.param("order", phi.order());
    report.check::<String>("proper coloring", Ok(()));
    let Some(forest) = forest else {
        return Ok(Output::report_only(report));
    };
    let trees = read_forest(forest)?;
    report.param("trees", trees.len());
    let mut all_ok = true;
    for (i, t) in trees.iter().enumerate() {
        all_ok &=
            report.check(&format!("tree {i} rainbow spanning"), verify_multicolored_spanning_tree(&phi, t));
    }
    if all_ok && (disjoint || isomorphic || partition) {
        let checks = FamilyChecks { disjoint, isomorphic, partition };
        let mut names = Vec::new();
        for (on, name) in [(disjoint, "edge-disjoint"), (isomorphic, "isomorphic"), (partition, "partition")]
        {
            if on {
                names.push(name);
            }
        }
        report.check(&names.join(", "), verify_family(&phi, &trees, checks));
    }
    Ok(Output::report_only(report))
}

pub fn latin(n: u32, strategy: Option<TransversalStrategy>) -> Result<Output> {
    let strategy = strategy.unwrap_or_else(|| TransversalStrategy::default_for(n));
    let mut report = RunReport::new("latin");
    report.param("n", n).param("strategy", strategy.to_string());
    let family = disjoint_transversals(n, strategy)?;
    report.detail("transversals", family.members.len());
    report.check("pairwise disjoint transversals", family.verify());
    let expected = 1usize << n;
    let full = if family.members.len() == expected && family.is_partition() {
        Ok(())
    } else {
        Err(format!("{} transversals, expected {expected}", family.members.len()))
    };
    report.check("transversals partition the cells", full);
    Ok(Output { report, artifact: Some(write_family(&family)) })
}

pub fn oracle(
    input: &Path,
    k: usize,
    isomorphic: bool,
    partition: bool,
    budget: Option<u64>,
) -> Result<Output> {
    let phi = read_coloring(input)?;
    let n = phi.order();
    let mut report = RunReport::new("oracle");
    report.param("order", n).param("k", k).param("isomorphic", isomorphic).param("partition", partition);
    let mut limits = SearchBudget::default();
    if let Some(nodes) = budget {
        limits = SearchBudget::new(nodes, limits.max_duration)?;
    }
    report.param("budget", limits.max_nodes);
    let search = if partition {
        if k != n / 2 {
            bail!("a partition of K_{n} has {} trees, not {k}", n / 2);
        }
        brute_force_partition(&phi, isomorphic, limits).map(|o| (o.found.map(|d| d.trees), o.nodes))
    } else {
        brute_force_disjoint_trees(&phi, k, isomorphic, limits).map(|o| (o.found, o.nodes))
    };
    let (found, nodes) = match search {
        Ok(r) => r,
        Err(e @ OracleError::BudgetExhausted { .. }) => {
            report.detail("verdict", "budget-exhausted");
            report.check("exhaustive search completed within budget", Err(e));
            return Ok(Output::report_only(report));
        }
        Err(e) => return Err(e.into()),
    };
    report.detail("nodes", nodes);
    report.check::<String>("exhaustive search completed within budget", Ok(()));
    match found {
        Some(trees) => {
            report.detail("verdict", "found");
            report.check("independent certificate", certificate(&phi, &trees, partition, isomorphic));
            Ok(Output { report, artifact: Some(write_forest(&trees)) })
        }
        None => {
            report.detail("verdict", "none");
            Ok(Output::report_only(report))
        }
    }
}

pub fn export(forest: &Path, coloring: &Path) -> Result<Output> {
    let phi = read_coloring(coloring)?;
    let trees = read_forest(forest)?;
    let mut report = RunReport::new("export");
    report.param("order", phi.order()).param("trees", trees.len());
    report.check("rainbow spanning trees", verify_family(&phi, &trees, FamilyChecks::default()));
    Ok(Output { report, artifact: Some(write_dot(&trees)) })
}
