//! Random search for small contact streams whose spectral gap of `M(T)`
//! increases with the decay rate somewhere on the standard alpha grid.
//!
//! Candidates have 3 to 5 nodes and at most 4 distinct event times. The
//! stream with the largest single-step rise of the gap is printed in the
//! event-file format.

use std::path::PathBuf;

use anyhow::Result;
use clap::Parser;
use rand::Rng;
use tiedecay::config::AlphaGrid;
use tiedecay::experiments::{flagged_intervals, positive_slope_flags, sweep_gaps};
use tiedecay::tiedecay_core::randomize::rng_from_seed;
use tiedecay::tiedecay_core::{Event, EventStream};

#[derive(Debug, Parser)]
struct Args {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 20_000)]
    candidates: usize,
    #[arg(long, default_value = "0.001:100:30")]
    alpha_grid: AlphaGrid,
    /// Write the best stream here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

const GAPS: [f64; 8] = [0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0];

fn candidate(rng: &mut impl Rng) -> EventStream {
    let n = rng.gen_range(3..=5u32);
    let times = rng.gen_range(2..=4usize);
    let mut t = 0.0;
    let mut events = Vec::new();
    for k in 0..times {
        if k > 0 {
            t += GAPS[rng.gen_range(0..GAPS.len())];
        }
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            events.push(Event::new(t, i, j));
        }
    }
    EventStream::from_events(n as usize, events, false).expect("candidate streams are valid")
}

fn main() -> Result<()> {
    let args = Args::parse();
    let alphas = args.alpha_grid.values();
    let mut rng = rng_from_seed(args.seed);
    let mut best: Option<(f64, EventStream)> = None;
    for _ in 0..args.candidates {
        let s = candidate(&mut rng);
        let gaps = sweep_gaps(&s, &alphas, s.horizon())?;
        if !positive_slope_flags(&alphas, &gaps).contains(&true) {
            continue;
        }
        let rise = gaps.windows(2).map(|w| w[1] - w[0]).fold(f64::MIN, f64::max);
        if best.as_ref().map_or(true, |(r, _)| rise > *r) {
            best = Some((rise, s));
        }
    }
    let Some((rise, s)) = best else {
        anyhow::bail!("no non-monotone stream among {} candidates", args.candidates);
    };
    let gaps = sweep_gaps(&s, &alphas, s.horizon())?;
    let intervals = flagged_intervals(&alphas, &positive_slope_flags(&alphas, &gaps));
    let mut text = format!(
        "# gap(alpha) of M(T) rises by up to {rise} between grid points\n# search seed {} over {} candidates\n# flagged alpha intervals: {intervals:?}\n",
        args.seed, args.candidates
    );
    text.push_str(&s.to_text());
    match args.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
