//! Ranks a table of published aggregate scores and writes a scatter plot.
//!
//! cargo run --example rank_published_scores -- [table.json] [plot.svg]

use std::path::PathBuf;

use albedo_bench::metrics::MetricKind;
use albedo_bench::ranking::Leaderboard;
use albedo_bench::report::{scatter_svg, MetricTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let table = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/published_scores.json"));
    let rows = MetricTable::load(&table)?.rows;
    let lb = Leaderboard::build(&rows, &MetricKind::ALBEDO, None)?;
    print!("{}", lb.to_text());

    if let Some(svg) = args.next() {
        let ranked: Vec<_> = lb.entries.iter().map(|e| e.scores.clone()).collect();
        std::fs::write(&svg, scatter_svg(&ranked, MetricKind::Whdr, MetricKind::Intensity)?)?;
        println!("plot written to {svg}");
    }
    Ok(())
}
