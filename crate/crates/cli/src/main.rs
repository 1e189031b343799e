use std::fmt::Write as _;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use evograph::attractor::{enumerate_attractors, EnumerationOptions, WitnessOutcome};
use evograph::dynamics::Outcome;
use evograph::game::{interior_threshold, Classification};
use evograph::graph6::decode_graph6_text;
use evograph::rational::{format_rational, parse_rational};
use evograph::statespace::{StateSpaceMap, DEFAULT_MAX_N};
use evograph::verify::{
    code, grid_points, sweep, verify_theorem, Claim, SweepOrder, SweepRequest, SweepSpec, VerificationReport,
};
use evograph::{Configuration, Error, Game, Graph, PayoffParams, PhaseMap, System, UpdateOrder, UpdateRule, UtilityKind};
use serde_json::json;

#[derive(Parser)]
#[command(name = "evograph", version, about = "Deterministic evolutionary games on graphs")]
struct Cli {
    /// Largest vertex count for which full state tables are built.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_N)]
    max_n: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GameArgs {
    /// kN, cN, wL or g6:<graph6 string>.
    #[arg(long)]
    graph: String,
    /// a,b,c,d as decimals or fractions.
    #[arg(long, allow_hyphen_values = true)]
    params: String,
    #[arg(long, default_value = "aggregate")]
    utility: String,
    #[arg(long, default_value = "imitation")]
    rule: String,
    /// sync, seq or blocks:1,2;3,4,...
    #[arg(long, default_value = "sync")]
    order: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Print a trajectory, one 0/1 line per step.
    Simulate {
        #[command(flatten)]
        game: GameArgs,
        /// 0/1 string (vertex 1 first), all-C, all-D, single-C@i or single-D@i.
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 100)]
        horizon: usize,
        /// Starting time.
        #[arg(long, default_value_t = 0)]
        t0: usize,
    },
    /// Admissibility, scenario and normalised form of a payoff quadruple.
    Classify {
        #[arg(allow_hyphen_values = true)]
        params: String,
    },
    /// Enumerate attractors of the full state space.
    Attractors {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Fail instead of falling back when there are too many orbits.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 16)]
        max_cycles: usize,
    },
    /// Check closed-form conditions against brute force.
    Verify {
        /// Claim names or their numeric aliases.
        #[arg(required = true)]
        claims: Vec<String>,
        /// Complete-graph sizes, e.g. 3..8 or 4,6.
        #[arg(long)]
        n: Option<String>,
        /// Wheel sizes.
        #[arg(long)]
        l: Option<String>,
        /// Parameter grid GxH over b in (-1,1), c in (0,2).
        #[arg(long)]
        grid: Option<String>,
        /// Regular graph for the regular-graph claim.
        #[arg(long)]
        graph: Option<String>,
        /// Restrict wheel checks to one utility kind.
        #[arg(long)]
        utility: Option<String>,
    },
    /// Outcome codes over a (b, c) grid at a = 1, d = 0, as CSV.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "sync")]
        order: String,
        /// lo,hi
        #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "0,2", allow_hyphen_values = true)]
        c: String,
        /// GxH cells.
        #[arg(long, default_value = "40x40")]
        resolution: String,
        /// Cross-check every cell by brute force.
        #[arg(long)]
        exact: bool,
    },
}

enum Failure {
    Lib(Error),
    BrokenPipe,
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::BrokenPipe;
        }
        Failure::Usage(format!("write failed: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = io::stdout();
    let mut out = out.lock();
    let result = match cli.command {
        Command::Simulate { game, init, horizon, t0 } => simulate(&mut out, &game, &init, horizon, t0),
        Command::Classify { params } => classify(&mut out, &params),
        Command::Attractors {
            game,
            format,
            exhaustive,
            max_cycles,
        } => attractors(&mut out, &game, format, exhaustive, max_cycles, cli.max_n),
        Command::Verify {
            claims,
            n,
            l,
            grid,
            graph,
            utility,
        } => verify(&mut out, &claims, n, l, grid, graph, utility),
        Command::Sweep {
            n,
            order,
            b,
            c,
            resolution,
            exact,
        } => run_sweep(&mut out, n, &order, &b, &c, &resolution, exact),
    };
    let _ = out.flush();
    match result {
        Ok(()) | Err(Failure::BrokenPipe) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Capacity(_) | Error::Overflow(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn parse_graph(spec: &str) -> Result<Graph, Failure> {
    if let Some(text) = spec.strip_prefix("g6:") {
        return Ok(decode_graph6_text(text)?);
    }
    let (kind, rest) = spec.split_at(spec.chars().next().map_or(0, char::len_utf8));
    let size: usize = rest
        .parse()
        .map_err(|_| Failure::Usage(format!("unknown graph {spec:?}; expected kN, cN, wL or g6:<string>")))?;
    Ok(match kind {
        "k" | "K" => Graph::complete(size)?,
        "c" | "C" => Graph::cycle(size)?,
        "w" | "W" => Graph::wheel(size)?,
        _ => return Err(Failure::Usage(format!("unknown graph family in {spec:?}"))),
    })
}

fn build_system(args: &GameArgs) -> Result<System, Failure> {
    let graph = parse_graph(&args.graph)?;
    let params: PayoffParams = args.params.parse()?;
    let kind: UtilityKind = args.utility.parse()?;
    let rule: UpdateRule = args.rule.parse()?;
    let order: UpdateOrder = args.order.parse()?;
    Ok(System::new(Game::new(graph, params, kind, rule)?, order)?)
}

fn simulate(out: &mut impl Write, args: &GameArgs, init: &str, horizon: usize, t0: usize) -> CmdResult {
    let sys = build_system(args)?;
    let x = Configuration::parse_named(init, sys.game().order())?;
    let sim = sys.simulate(t0, &x, horizon)?;
    for state in &sim.states {
        writeln!(out, "{state}")?;
    }
    if horizon == 0 {
        return Ok(());
    }
    match sim.outcome {
        Outcome::Fixed { step } => writeln!(out, "FIXED step={step}")?,
        Outcome::Cycle { entered, period } => writeln!(out, "CYCLE entered={entered} period={period}")?,
        Outcome::Horizon => writeln!(out, "HORIZON step={horizon}")?,
    }
    Ok(())
}

fn classify(out: &mut impl Write, text: &str) -> CmdResult {
    let p: PayoffParams = text.parse()?;
    writeln!(out, "params: {p}")?;
    match p.classify() {
        Classification::NotAdmissible(v) => {
            writeln!(out, "NotAdmissible: {v}")?;
        }
        Classification::Admissible(s) => {
            writeln!(out, "scenario: {s}")?;
            writeln!(out, "admissible: yes")?;
            if p.is_normalized() {
                writeln!(out, "normalized: {p} (already normalized)")?;
            } else {
                writeln!(out, "normalized: {}", p.normalize()?)?;
            }
        }
    }
    Ok(())
}

fn hex_list(states: &[u64]) -> Vec<String> {
    states.iter().map(|x| format!("{x:#x}")).collect()
}

fn attractors(
    out: &mut impl Write,
    args: &GameArgs,
    format: Format,
    exhaustive: bool,
    max_cycles: usize,
    max_n: usize,
) -> CmdResult {
    let sys = build_system(args)?;
    let n = sys.game().order();
    let map = StateSpaceMap::build(&sys, max_n)?;
    let opts = EnumerationOptions {
        exhaustive,
        max_cycles,
        ..EnumerationOptions::default()
    };
    let e = enumerate_attractors(&map, &opts)?;
    match format {
        Format::Records => {
            for (i, r) in e.attractors.iter().enumerate() {
                let record = json!({
                    "index": i,
                    "time_independent": r.set.is_time_independent(),
                    "states": hex_list(&r.set.configurations()),
                    "sections": r.set.sections().iter().map(|s| hex_list(s)).collect::<Vec<_>>(),
                    "basin_size": r.basin_size,
                    "minimal": r.minimal,
                    "trivial": r.trivial,
                    "max_hitting_time": r.max_hitting_time,
                    "cycle_lengths": r.cycles.iter().map(|&c| e.cycles[c].len()).collect::<Vec<_>>(),
                });
                writeln!(out, "{record}")?;
            }
        }
        Format::Text => {
            let mut lens = std::collections::BTreeMap::<usize, usize>::new();
            for c in &e.cycles {
                *lens.entry(c.len()).or_default() += 1;
            }
            let lens: Vec<String> = lens.iter().map(|(len, count)| format!("{count} of length {len}")).collect();
            writeln!(
                out,
                "graph: {} vertices, order {}, period {}",
                n,
                sys.update_order(),
                map.period()
            )?;
            writeln!(out, "periodic orbits: {} ({})", e.cycles.len(), lens.join(", "))?;
            if !e.complete {
                writeln!(out, "note: more than {max_cycles} orbits; listing minimal attractors and the maximal set")?;
            }
            if e.nontrivial().next().is_none() {
                writeln!(out, "no nontrivial attractor")?;
            }
            for (i, r) in e.attractors.iter().enumerate() {
                let mut tags = Vec::new();
                if r.minimal {
                    tags.push("minimal");
                }
                if r.trivial {
                    tags.push("maximal invariant set");
                }
                writeln!(out, "attractor {i}{}", if tags.is_empty() { String::new() } else { format!(" [{}]", tags.join(", ")) })?;
                let configs = r.set.configurations();
                let shown: Vec<String> = configs
                    .iter()
                    .take(16)
                    .map(|&x| Configuration::from_bits(n, x).map(|c| c.to_string()))
                    .collect::<Result<_, _>>()?;
                let more = if configs.len() > shown.len() {
                    format!(" ... ({} total)", configs.len())
                } else {
                    String::new()
                };
                writeln!(out, "  states: {}{more}", shown.join(" "))?;
                if !r.set.is_time_independent() {
                    let sizes: Vec<usize> = r.set.sections().iter().map(Vec::len).collect();
                    writeln!(out, "  section sizes by phase: {sizes:?}")?;
                }
                let mut line = String::new();
                if let Some(b) = r.basin_size {
                    let _ = write!(line, "  basin: {b} of {}", map.lifted_len());
                }
                if let Some(h) = r.max_hitting_time {
                    let _ = write!(line, ", max hitting time {h}");
                }
                writeln!(out, "{line}")?;
                if let Some(w) = r.counterexample() {
                    if let WitnessOutcome::Cycles { repeated } = w.outcome {
                        writeln!(
                            out,
                            "  escapes: from {} at phase {} the orbit returns to {}",
                            w.start.config(n),
                            w.start.phase,
                            repeated.config(n)
                        )?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("invalid size list {text:?}; expected e.g. 3..8 or 4,6"));
    let mut sizes = Vec::new();
    for part in text.split(',') {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            sizes.extend(lo..=hi);
        } else {
            sizes.push(part.trim().parse().map_err(|_| bad())?);
        }
    }
    Ok(sizes)
}

fn parse_resolution(text: &str) -> Result<(usize, usize), Failure> {
    let (g, h) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| Failure::Usage(format!("invalid grid {text:?}; expected GxH")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("invalid grid {text:?}; expected GxH")))
    };
    Ok((num(g)?, num(h)?))
}

fn print_report(out: &mut impl Write, r: &VerificationReport) -> io::Result<()> {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    writeln!(
        out,
        "{verdict} {} ({}): {} checks, {} agree, {} disagree, {} converse violations",
        r.claim.number(),
        r.claim,
        r.checked,
        r.agreements,
        r.disagreements.len(),
        r.converse_violations.len()
    )?;
    for f in &r.disagreements {
        writeln!(out, "  counterexample {f}")?;
    }
    for f in &r.converse_violations {
        writeln!(out, "  converse violation {f}")?;
    }
    for note in &r.notes {
        writeln!(out, "  note: {note}")?;
    }
    Ok(())
}

fn verify(
    out: &mut impl Write,
    claims: &[String],
    n: Option<String>,
    l: Option<String>,
    grid: Option<String>,
    graph: Option<String>,
    utility: Option<String>,
) -> CmdResult {
    let claims: Vec<Claim> = claims.iter().map(|c| c.parse()).collect::<Result<_, _>>()?;
    let grid = grid.as_deref().map(parse_resolution).transpose()?;
    if grid.is_some_and(|(g, h)| g == 0 || h == 0) {
        return Err(Failure::Usage("grid resolution must be positive".into()));
    }
    let n = n.as_deref().map(parse_sizes).transpose()?;
    let l = l.as_deref().map(parse_sizes).transpose()?;
    let graph = graph.as_deref().map(parse_graph).transpose()?;
    let kind = utility.as_deref().map(str::parse::<UtilityKind>).transpose()?;
    let mut all_passed = true;
    for claim in claims {
        let mut spec = SweepSpec::default_for(claim);
        if let Some((g, h)) = grid {
            spec.points = grid_points(g, h);
        }
        let sizes = match claim {
            Claim::WheelCooperation | Claim::WheelDefection => l.clone(),
            _ => n.clone(),
        };
        if let Some(s) = sizes {
            spec.sizes = s;
        }
        spec.graph = graph.clone();
        if let Some(k) = kind {
            spec.kinds = vec![k];
        }
        let report = verify_theorem(claim, &spec)?;
        print_report(out, &report)?;
        all_passed &= report.passed();
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn parse_range(text: &str) -> Result<(evograph::Rational, evograph::Rational), Failure> {
    let (lo, hi) = text
        .split_once(',')
        .ok_or_else(|| Failure::Usage(format!("invalid range {text:?}; expected lo,hi")))?;
    Ok((parse_rational(lo)?, parse_rational(hi)?))
}

fn run_sweep(
    out: &mut impl Write,
    n: usize,
    order: &str,
    b: &str,
    c: &str,
    resolution: &str,
    exact: bool,
) -> CmdResult {
    let order: SweepOrder = order.parse()?;
    let mut req = SweepRequest::new(n, order, parse_resolution(resolution)?);
    req.b_range = parse_range(b)?;
    req.c_range = parse_range(c)?;
    req.exact = exact;
    let cells = sweep(&req)?;
    let order_name = match order {
        SweepOrder::Synchronous => "sync",
        SweepOrder::Sequential => "seq",
    };
    let (g, h) = req.resolution;
    writeln!(out, "# complete graph n={n}, order={order_name}, a=1, d=0")?;
    writeln!(
        out,
        "# b in ({},{}), c in ({},{}), {g}x{h} cell centres, b outermost",
        format_rational(&req.b_range.0),
        format_rational(&req.b_range.1),
        format_rational(&req.c_range.0),
        format_rational(&req.c_range.1)
    )?;
    for (k, meaning) in code::LEGEND {
        writeln!(out, "# code {k}: {meaning}")?;
    }
    writeln!(out, "b,c,code")?;
    let mut mismatches = Vec::new();
    for cell in &cells {
        writeln!(out, "{},{},{}", format_rational(&cell.b), format_rational(&cell.c), cell.code)?;
        if let Some(exact) = cell.exact.filter(|&e| e != cell.code) {
            mismatches.push((cell, exact));
        }
    }
    if exact {
        writeln!(out, "# brute force disagrees with the predicates in {} cells", mismatches.len())?;
        for (cell, exact) in &mismatches {
            let p = PayoffParams::new(1.into(), cell.b, cell.c, 0.into());
            let m = interior_threshold(&p, n).map_or("undefined".to_string(), |m| format_rational(&m));
            writeln!(
                out,
                "# mismatch b={} c={}: predicted {}, brute force {exact}, m*={m}",
                format_rational(&cell.b),
                format_rational(&cell.c),
                cell.code
            )?;
        }
        if !mismatches.is_empty() {
            return Err(Failure::Verification);
        }
    }
    Ok(())
}
