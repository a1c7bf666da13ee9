use std::fmt::Write;

use xclust_core::info::attribute_information;
use xclust_core::{AttributeStatistics, ClusteringSolution, Dataset, PriorModel, SearchTrace};

fn stats(s: &AttributeStatistics) -> String {
    match s {
        AttributeStatistics::Boolean { frequency } => format!("freq {frequency:.4}"),
        AttributeStatistics::Real { mean, stdev } => format!("mean {mean:.4} sd {stdev:.4}"),
    }
}

/// Plain-text explanation of every cluster, attributes by decreasing
/// information.
pub fn render(dataset: &Dataset, prior: &PriorModel, s: &ClusteringSolution, trace: &SearchTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "clusters:    {}", s.k());
    let _ = writeln!(out, "attributes:  {}", s.attribute_count());
    let _ = writeln!(out, "information: {:.4} bits", s.total_information);
    let _ = writeln!(out, "si:          {:.6}", s.si);
    let _ = writeln!(
        out,
        "iterations:  {}{}",
        s.iterations_completed,
        if trace.expired { " (budget expired)" } else { "" }
    );
    let n = dataset.n() as f64;
    for (c, p) in s.patterns.iter().enumerate() {
        let _ = writeln!(
            out,
            "\ncluster {c} (node {}): {} points, {:.1}%",
            s.cut_set.nodes()[c],
            p.size(),
            100.0 * p.size() as f64 / n
        );
        let mut rows: Vec<(f64, usize, &AttributeStatistics)> = p
            .attributes()
            .iter()
            .zip(p.statistics())
            .map(|(&j, st)| (attribute_information(p.size(), st, prior.get(j)), j, st))
            .collect();
        rows.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let width = rows
            .iter()
            .map(|r| dataset.attribute(r.1).name.len())
            .max()
            .unwrap_or(0);
        for (info, j, st) in rows {
            let _ = writeln!(
                out,
                "  {:<width$}  cluster {:<28} prior {:<28} {:.4} bits",
                dataset.attribute(j).name,
                stats(st),
                stats(prior.get(j)),
                info,
            );
        }
    }
    out
}
