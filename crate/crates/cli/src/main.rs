use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use semidirected::batch::distance_matrix;
use semidirected::distance::{d_mu_e, weighted_d};
use semidirected::generator::{gen_tree_child, GenConfig};
use semidirected::io::{murep_from_json, murep_to_json, parse_lengths, parse_network, serialize_network};
use semidirected::murep::mu_edge_rep_with;
use semidirected::oracle;
use semidirected::reconstruct::reconstruct_network;
use semidirected::structure::{
    self, check_labeled, classify_leaves, completion, network_decomposition, partner_count, tree_child_classify,
    TreeChildStatus,
};
use semidirected::Network;

#[derive(Parser)]
#[command(name = "sdnet", version, about = "Semidirected phylogenetic network toolkit")]
struct Cli {
    /// Cross-check results against brute-force implementations.
    #[arg(long, global = true, hide = true)]
    oracle: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file describes a labeled network.
    Validate { file: PathBuf },
    /// Direct every edge whose direction is forced.
    Complete {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tree-child status, root components and leaf classes.
    Classify { file: PathBuf },
    /// Count or list the rooted partners.
    Partners {
        file: PathBuf,
        #[arg(long, conflicts_with = "enumerate")]
        count: bool,
        #[arg(long)]
        enumerate: bool,
    },
    /// Edge-based mu-representation.
    Murep {
        file: PathBuf,
        /// Write JSON to this path (`-` for stdout).
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
        #[arg(long)]
        simplified: bool,
    },
    /// Distance between two networks, or a matrix over a directory.
    Dist(DistArgs),
    /// Rebuild a network from a JSON representation.
    Reconstruct {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random strongly tree-child network.
    Gen(GenArgs),
}

#[derive(Args)]
struct DistArgs {
    #[arg(required_unless_present = "matrix")]
    first: Option<PathBuf>,
    #[arg(required_unless_present = "matrix")]
    second: Option<PathBuf>,
    /// Print the elements found in only one of the networks.
    #[arg(long)]
    witness: bool,
    /// Weighted variant with this exponent; needs --lengths.
    #[arg(long, value_name = "P", requires = "lengths")]
    weighted: Option<f64>,
    #[arg(long, value_name = "FILE", requires = "weighted")]
    lengths: Option<PathBuf>,
    /// All pairwise distances between the `.net` files of a directory.
    #[arg(long, value_name = "DIR", conflicts_with_all = ["first", "second", "witness", "weighted"])]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    leaves: usize,
    #[arg(long, default_value_t = 0)]
    hybrids: usize,
    #[arg(long, default_value_t = 1)]
    roots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    max_indegree: usize,
    #[arg(long)]
    parallel_edges: bool,
    #[arg(long)]
    no_elementary: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    InFile { path: PathBuf, source: semidirected::Error },
    #[error(transparent)]
    Domain(#[from] semidirected::Error),
    #[error("oracle disagrees: {0}")]
    Oracle(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::InFile { source, .. } | CliError::Domain(source) if source.is_parse_error() => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn load(path: &Path) -> Result<Network> {
    parse_network(&read(path)?).map_err(|source| CliError::InFile { path: path.into(), source })
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).map_err(|source| CliError::Io { path: p.into(), source })
        }
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn names(n: &Network, xs: &[semidirected::NodeId]) -> String {
    if xs.is_empty() {
        return "(none)".into();
    }
    xs.iter().map(|&x| n.name(x)).collect::<Vec<_>>().join(",")
}

fn validate(file: &Path) -> Result<String> {
    let n = load(file)?;
    let d = network_decomposition(&n)?;
    check_labeled(&n)?;
    Ok(format!(
        "ok: {} nodes, {} edges, {} root components, {} labels\n",
        n.node_count(),
        n.edge_count(),
        d.root_component_count(),
        n.labels().len()
    ))
}

fn classify(file: &Path, use_oracle: bool) -> Result<String> {
    let n = load(file)?;
    let d = network_decomposition(&n)?;
    let status = tree_child_classify(&n)?;
    if use_oracle {
        let brute = oracle::tree_child_brute(&n)?;
        if brute != status {
            return Err(CliError::Oracle(format!("{} vs brute force {}", status.name(), brute.name())));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "tree-child: {}", status.name());
    if let TreeChildStatus::WeakOnly { witnesses } = &status {
        for (k, x) in witnesses {
            let _ = writeln!(out, "  component {k}: only rooted at {}", n.name(*x));
        }
    }
    let _ = writeln!(out, "root components: {}", d.root_component_count());
    for k in 0..d.root_component_count() {
        let _ = writeln!(out, "  {k}: {}", names(&n, &d.root_component(k).nodes));
    }
    let leaves = classify_leaves(&n)?;
    let _ = writeln!(out, "rooted leaves: {}", names(&n, &leaves.rooted_leaves));
    let _ = writeln!(out, "ambiguous leaves: {}", names(&n, &leaves.ambiguous_leaves));
    Ok(out)
}

fn partners(file: &Path, enumerate: bool, use_oracle: bool) -> Result<String> {
    let n = load(file)?;
    let count = partner_count(&n)?;
    if use_oracle {
        let brute = oracle::enumerate_partners(&n)?.len() as u128;
        if brute != count {
            return Err(CliError::Oracle(format!("{count} partners vs {brute} enumerated")));
        }
    }
    if !enumerate {
        return Ok(format!("{count}\n"));
    }
    let mut out = String::new();
    for (k, choice) in structure::enumerate_root_choices(&n)?.iter().enumerate() {
        let p = structure::rooted_partner(&n, choice)?;
        let _ = writeln!(out, "# partner {k}: roots {}", names(&n, &choice.0));
        out.push_str(&serialize_network(&p));
        out.push('\n');
    }
    Ok(out)
}

fn dist(args: &DistArgs) -> Result<String> {
    if let Some(dir) = &args.matrix {
        return matrix(dir);
    }
    let (f1, f2) = (args.first.as_deref().unwrap(), args.second.as_deref().unwrap());
    let (n1, n2) = (load(f1)?, load(f2)?);
    let mut out = String::new();
    if let Some(p) = args.weighted {
        let path = args.lengths.as_deref().unwrap();
        let (l1, l2) = parse_lengths(&read(path)?, n1.edge_count(), n2.edge_count())
            .map_err(|source| CliError::InFile { path: path.into(), source })?;
        let w = weighted_d(&n1, &n2, &l1, &l2, p)?;
        let _ = writeln!(out, "{w}");
        return Ok(out);
    }
    let d = d_mu_e(&n1, &n2)?;
    if args.witness {
        let _ = writeln!(out, "only in {}:", f1.display());
        for s in d.left_only.iter() {
            let _ = writeln!(out, "  {s}");
        }
        let _ = writeln!(out, "only in {}:", f2.display());
        for s in d.right_only.iter() {
            let _ = writeln!(out, "  {s}");
        }
    }
    let _ = writeln!(out, "{}", d.value);
    Ok(out)
}

fn matrix(dir: &Path) -> Result<String> {
    let entries = std::fs::read_dir(dir).map_err(|source| CliError::Io { path: dir.into(), source })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "net"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!("{}: no .net files", dir.display())));
    }
    let nets = files.iter().map(|f| load(f)).collect::<Result<Vec<_>>>()?;
    let m = distance_matrix(&nets)?;
    let mut out = String::new();
    let stems: Vec<String> = files.iter().map(|f| f.file_stem().unwrap().to_string_lossy().into_owned()).collect();
    let _ = writeln!(out, "\t{}", stems.join("\t"));
    for (name, row) in stems.iter().zip(&m) {
        let cells: Vec<String> = row.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "{name}\t{}", cells.join("\t"));
    }
    Ok(out)
}

fn gen(args: &GenArgs) -> Result<String> {
    let mut cfg = GenConfig::new(args.leaves, args.hybrids, args.roots, args.seed);
    cfg.max_in_degree = args.max_indegree;
    cfg.allow_parallel = args.parallel_edges;
    cfg.forbid_elementary = args.no_elementary;
    Ok(serialize_network(&gen_tree_child(&cfg)?))
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Validate { file } => emit(&validate(file)?, None),
        Command::Complete { file, output } => {
            let n = completion(&load(file)?)?;
            emit(&serialize_network(&n), output.as_deref())
        }
        Command::Classify { file } => emit(&classify(file, cli.oracle)?, None),
        Command::Partners { file, count: _, enumerate } => emit(&partners(file, *enumerate, cli.oracle)?, None),
        Command::Murep { file, json, simplified } => {
            let rep = mu_edge_rep_with(&load(file)?, *simplified)?;
            match json {
                Some(out) => emit(&murep_to_json(&rep), Some(out)),
                None => emit(&rep.to_string(), None),
            }
        }
        Command::Dist(args) => emit(&dist(args)?, None),
        Command::Reconstruct { file, output } => {
            let rep = murep_from_json(&read(file)?).map_err(|source| CliError::InFile { path: file.clone(), source })?;
            emit(&serialize_network(&reconstruct_network(&rep)?), output.as_deref())
        }
        Command::Gen(args) => emit(&gen(args)?, args.output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
