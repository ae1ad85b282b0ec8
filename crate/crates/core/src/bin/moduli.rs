use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use moduli::boundary_map::{SampledCircleMap, DEFAULT_TOLERANCE};
use moduli::fuchsian::{max_gap, sink_sample_with, BallLimits, GroupRepresentation, Letter, Word, SAMPLE_CLASSIFY_TOL};
use moduli::io;
use moduli::marked_moduli::{converge_report, default_anchors, report_csv, MarkedStructure};
use moduli::mcg_action::{act, verify_action_formula};
use moduli::moebius::ElementClass;
use moduli::{Error, Result};

const MAX_DEPTH: usize = 12;
const RANDOM_TESTERS: usize = 8;
const RANDOM_TESTER_LENGTH: usize = 4;
const SVG_CHORDS: usize = 400;

#[derive(Parser)]
#[command(name = "moduli", version, about = "Marked hyperbolic structures and their boundary maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Word length of the ball used for sampling.
    #[arg(long = "depth", short = 'L', global = true, default_value_t = 6)]
    depth: usize,
    /// Order tolerance for boundary maps, in radians.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Anchor words pinned to 0, 1 and ∞, comma separated.
    #[arg(long, global = true)]
    anchors: Option<String>,
    /// Seed for randomized diagnostics.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Also render SVG output where available.
    #[arg(long, global = true)]
    svg: bool,
    /// Largest ball size to enumerate.
    #[arg(long, global = true, default_value_t = BallLimits::default().budget)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build a representation from a pants file.
    Build { pants: PathBuf },
    /// Sample sinks of a representation.
    Sinks { representation: PathBuf },
    /// Boundary map between two representations.
    Bmap { reference: PathBuf, target: PathBuf },
    /// Convergence report of a manifest sequence against a limit target.
    Converge { manifest: PathBuf, limit: PathBuf },
    /// Apply a mapping class to a marked structure.
    Act { marked: PathBuf, mapping_class: PathBuf },
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.depth > MAX_DEPTH {
            return Err(Error::DepthExceedsCap {
                depth: self.depth,
                cap: MAX_DEPTH,
            });
        }
        if !(self.tol > 0.0) {
            return Err(Error::Input(format!("tolerance must be positive, got {}", self.tol)));
        }
        fs::create_dir_all(&self.out)?;
        Ok(())
    }

    fn limits(&self) -> BallLimits {
        BallLimits {
            max_depth: MAX_DEPTH,
            ..BallLimits::with_budget(self.budget)
        }
    }

    fn anchors(&self, rep: &GroupRepresentation) -> Result<[Word; 3]> {
        let Some(text) = &self.anchors else {
            return default_anchors(rep);
        };
        let words = text.split(',').map(|w| rep.parse_word(w)).collect::<Result<Vec<_>>>()?;
        <[Word; 3]>::try_from(words)
            .map_err(|w| Error::Input(format!("expected 3 anchor words, got {}", w.len())))
    }

    fn output(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn write(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_build(run: &RunConfig, pants: &Path) -> Result<()> {
    let rep = io::read_pants(pants)?.build_representation()?;
    println!("{:<6} {:<16} {:>14} {:>14} {:>10}", "kind", "word", "expected", "|trace|", "deviation");
    for cuff in rep.cuffs() {
        let expected = 2.0 * (cuff.length / 2.0).cosh();
        let trace = rep.evaluate(&cuff.word)?.trace().abs();
        println!(
            "{:<6} {:<16} {:>14.10} {:>14.10} {:>10.2e}",
            "cuff",
            rep.show(&cuff.word),
            expected,
            trace,
            (trace - expected).abs()
        );
    }
    for word in rep.peripheral_words() {
        let m = rep.evaluate(word)?;
        let trace = m.trace().abs();
        let class = m.classify(1e-6);
        println!(
            "{:<6} {:<16} {:>14.10} {:>14.10} {:>10.2e} {class}",
            "cusp",
            rep.show(word),
            2.0,
            trace,
            (trace - 2.0).abs()
        );
        if class != ElementClass::Parabolic {
            return Err(Error::InvalidRepresentation(format!("cusp word `{}` is {class}", rep.show(word))));
        }
    }
    let stem = pants.file_stem().and_then(|s| s.to_str()).unwrap_or("surface");
    let path = run.output(&format!("{stem}.rep.json"));
    io::write_representation(&path, &rep)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_sinks(run: &RunConfig, path: &Path) -> Result<()> {
    let rep = io::read_representation(path)?;
    let sample = sink_sample_with(&rep, run.depth, &run.limits(), SAMPLE_CLASSIFY_TOL)?;
    let mut csv = String::from("word,angle\n");
    for (w, p) in sample.entries() {
        csv.push_str(&format!("{},{:.15}\n", rep.show(w), p.angle()));
    }
    println!("sinks: {}", sample.len());
    println!("max_gap: {:.6e}", max_gap(&sample)?);
    write(&run.output("sinks.csv"), &csv)
}

fn random_testers(rep: &GroupRepresentation, seed: u64) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut testers: Vec<Word> = (0..rep.rank()).map(Word::generator).collect();
    while testers.len() < rep.rank() + RANDOM_TESTERS {
        let len = rng.gen_range(2..=RANDOM_TESTER_LENGTH);
        let w = Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(0..rep.rank()), rng.gen())));
        if !w.is_empty() {
            testers.push(w);
        }
    }
    testers
}

fn cmd_bmap(run: &RunConfig, reference: &Path, target: &Path) -> Result<()> {
    let ms = MarkedStructure::new(io::read_representation(reference)?, io::read_representation(target)?)?
        .with_limits(run.limits());
    let (base, target) = (ms.reference(), ms.target());
    let f = SampledCircleMap::from_ball_with(base, target, run.depth, ms.limits(), run.tol)?;
    let testers = random_testers(base, run.seed);
    println!("samples: {}", f.len());
    println!("monotonicity: PASS");
    println!("equivariance_defect: {:.6e}", f.check_equivariance(base, target, &testers)?);
    println!("max_gap: {:.6e}", f.max_gap());
    write(&run.output("bmap.csv"), &f.to_csv(base.names()))?;
    if run.svg {
        write(&run.output("bmap.svg"), &f.to_svg(SVG_CHORDS))?;
    }
    Ok(())
}

fn cmd_converge(run: &RunConfig, manifest: &Path, limit: &Path) -> Result<()> {
    let (reference, sequence) = io::read_manifest(manifest)?;
    let limits = run.limits();
    let sequence: Vec<_> = sequence.into_iter().map(|ms| ms.with_limits(limits)).collect();
    let limit = MarkedStructure::new(reference.clone(), io::read_representation(limit)?)?.with_limits(limits);
    let anchors = run.anchors(&reference)?;
    let rows = converge_report(&sequence, &limit, run.depth, &anchors)?;
    let csv = report_csv(&rows);
    print!("{csv}");
    write(&run.output("converge.csv"), &csv)
}

fn cmd_act(run: &RunConfig, marked: &Path, mapping_class: &Path) -> Result<()> {
    let ms = io::read_marked(marked)?.with_limits(run.limits());
    let mc = io::read_mapping_class(mapping_class, ms.reference().names())?;
    let acted = act(&ms, &mc)?;
    let defect = verify_action_formula(&ms, &mc, run.depth)?;
    println!("action_formula_defect: {defect:.6e}");
    let path = run.output("acted.rep.json");
    io::write_representation(&path, acted.target())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let run = &cli.run;
    run.validate()?;
    match &cli.command {
        Command::Build { pants } => cmd_build(run, pants),
        Command::Sinks { representation } => cmd_sinks(run, representation),
        Command::Bmap { reference, target } => cmd_bmap(run, reference, target),
        Command::Converge { manifest, limit } => cmd_converge(run, manifest, limit),
        Command::Act { marked, mapping_class } => cmd_act(run, marked, mapping_class),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
