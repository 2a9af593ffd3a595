//! The `hcs` command line.
//!
//! Exit codes: 0 on success, 1 on domain errors (invalid system, exhausted
//! search, failed group assertion), 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::autgroup::{automorphism_group, brute_force_aut, classify, report, PermGroup};
use crate::design::{parse_system, validate, CycleSystem, Vertex};
use crate::doubling::{check_compatible, double};
use crate::error::Error;
use crate::groups::{is_isomorphic, parse_group_spec, FiniteGroup};
use crate::prescribe::{construct_binary_unchecked, construct_odd_unchecked};
use crate::rotational::{
    develop, find_starter, parse_starter_file, serialize_starter, SearchBudget, Starter,
};

#[derive(Debug, Parser)]
#[command(
    name = "hcs",
    version,
    about = "Hamiltonian cycle systems with prescribed automorphism groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a file holds a Hamiltonian cycle system
    Verify { file: PathBuf },
    /// Compute and classify the full automorphism group
    Aut {
        file: PathBuf,
        /// Cross-check against brute-force enumeration (v <= 9)
        #[arg(long)]
        oracle: bool,
        /// Fail unless the group is isomorphic to this group spec
        #[arg(long, value_name = "SPEC")]
        assert_group: Option<String>,
    },
    /// Double three compatible HCS(2n+1) into an HCS(4n+1)
    Double {
        h1: PathBuf,
        h2: PathBuf,
        h3: PathBuf,
        #[arg(short = 'o', value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Build a system whose full automorphism group is prescribed
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Search for a 1-rotational starter over a binary group
    Starter {
        #[arg(long, value_name = "SPEC")]
        group: String,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(short = 'o', value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Develop a starter file into its 1-rotational system
    Develop {
        starter: PathBuf,
        #[arg(short = 'o', value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Relabel plain vertices, e.g. `--map 1:2,2:1`
    Relabel {
        file: PathBuf,
        #[arg(long, value_name = "A:B,...")]
        map: String,
        #[arg(short = 'o', value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum ConstructKind {
    /// Odd-order group G: an HCS(4|G|+1) with Aut = G
    Odd {
        #[arg(long, value_name = "SPEC")]
        group: String,
        #[command(flatten)]
        common: ConstructArgs,
    },
    /// Binary group H of order 4m: an HCS(|H|d+1) with Aut = H
    Binary {
        #[arg(long, value_name = "SPEC")]
        group: String,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        common: ConstructArgs,
    },
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Starter search node budget
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

impl SearchArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_nodes: self.budget,
            seed: self.seed,
            ..SearchBudget::default()
        }
    }
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[command(flatten)]
    search: SearchArgs,
    #[arg(short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
    /// Additionally require Aut to be isomorphic to this group spec
    #[arg(long, value_name = "SPEC")]
    assert_group: Option<String>,
    /// Report a wrong automorphism group as a warning instead of failing
    #[arg(long)]
    no_assert: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

#[derive(Default)]
struct Output {
    stdout: String,
    stderr: String,
}

/// Runs the command line and returns the exit code and captured output.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut out = Output::default();
    let code = match dispatch(cli.command, &mut out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            out.stderr.push_str(&format!("error: {msg}\n"));
            2
        }
        Err(Failure::Domain(msg)) => {
            out.stderr.push_str(&format!("error: {msg}\n"));
            1
        }
    };
    Outcome {
        code,
        stdout: out.stdout,
        stderr: out.stderr,
    }
}

fn group_flag(spec: &str) -> Result<FiniteGroup, Failure> {
    parse_group_spec(spec).map_err(|e| Failure::Usage(e.to_string()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn read_system(path: &Path) -> Result<CycleSystem, Failure> {
    parse_system(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

/// Writes a system after re-validating it; invalid systems are never written.
fn emit_system(
    system: &CycleSystem,
    output: Option<&Path>,
    out: &mut Output,
) -> Result<(), Failure> {
    let check = validate(system);
    if !check.ok {
        return Err(Failure::Domain(format!(
            "refusing to write an invalid system: {check}"
        )));
    }
    emit_text(&system.to_string(), output, out)
}

fn emit_text(text: &str, output: Option<&Path>, out: &mut Output) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
        }
        None => {
            out.stdout.push_str(text);
            Ok(())
        }
    }
}

fn isomorphic_to(aut: &PermGroup, expected: &FiniteGroup) -> Result<bool, Failure> {
    if aut.order() != expected.order() {
        return Ok(false);
    }
    Ok(is_isomorphic(&aut.to_finite_group("Aut")?, expected)?.is_some())
}

fn dispatch(command: Command, out: &mut Output) -> Result<(), Failure> {
    match command {
        Command::Verify { file } => {
            let system = read_system(&file)?;
            let check = validate(&system);
            if check.ok {
                out.stdout
                    .push_str(&format!("valid HCS, v={}\n", system.v()));
                Ok(())
            } else {
                out.stdout
                    .push_str(&format!("invalid HCS, v={}\n{check}", system.v()));
                Err(Failure::Domain("not a Hamiltonian cycle system".into()))
            }
        }
        Command::Aut {
            file,
            oracle,
            assert_group,
        } => {
            let expected = assert_group.as_deref().map(group_flag).transpose()?;
            let system = read_system(&file)?;
            let aut = automorphism_group(&system)?;
            out.stdout.push_str(&report(&system, &aut));
            if oracle {
                let brute = brute_force_aut(&system)?;
                if brute != aut {
                    return Err(Failure::Domain(format!(
                        "oracle disagrees: brute force found order {}",
                        brute.order()
                    )));
                }
                out.stdout.push_str("oracle=agree\n");
            }
            if let Some(g) = expected {
                if !isomorphic_to(&aut, &g)? {
                    return Err(Failure::Domain(format!(
                        "automorphism group is not isomorphic to {}",
                        g.name()
                    )));
                }
            }
            Ok(())
        }
        Command::Double { h1, h2, h3, output } => {
            let (a, b, c) = (read_system(&h1)?, read_system(&h2)?, read_system(&h3)?);
            let input = check_compatible(&a, &b, &c)?;
            let system = double(&input)?;
            emit_system(&system, output.as_deref(), out)
        }
        Command::Starter {
            group,
            search,
            output,
        } => {
            let g = group_flag(&group)?;
            if !g.is_binary() {
                return Err(Failure::Usage(format!("{} is not binary", g.name())));
            }
            let starter = find_starter(&g, search.budget())?;
            emit_text(&serialize_starter(&group, &starter), output.as_deref(), out)
        }
        Command::Develop { starter, output } => {
            let (spec, alphas) = parse_starter_file(&read(&starter)?)?;
            let g = parse_group_spec(&spec)?;
            let s = Starter::new(&g, alphas)?;
            emit_system(&develop(&g, &s)?, output.as_deref(), out)
        }
        Command::Relabel { file, map, output } => {
            let pairs = parse_relabel_map(&map).map_err(Failure::Usage)?;
            let system = read_system(&file)?;
            let relabelled = system.relabel(|x| match x {
                Vertex::Plain(i) => pairs
                    .iter()
                    .find(|(from, _)| *from == i)
                    .map_or(x, |&(_, to)| Vertex::Plain(to)),
                other => other,
            })?;
            if relabelled.vertices() != system.vertices() {
                return Err(Failure::Usage(
                    "relabelling must permute the vertex set".into(),
                ));
            }
            emit_system(&relabelled, output.as_deref(), out)
        }
        Command::Construct { kind } => construct(kind, out),
    }
}

fn construct(kind: ConstructKind, out: &mut Output) -> Result<(), Failure> {
    match kind {
        ConstructKind::Odd { group, common } => {
            let g = group_flag(&group)?;
            if g.order() % 2 == 0 {
                return Err(Failure::Usage(format!("{} has even order", g.name())));
            }
            let extra = common.assert_group.as_deref().map(group_flag).transpose()?;
            let built = construct_odd_unchecked(&g, common.search.budget())?;
            let aut = automorphism_group(&built.system)?;
            let iso = isomorphic_to(&aut, &g)?;
            out.stdout.push_str(&built.trace_report(Some((&aut, iso))));
            finish(&built.system, &aut, iso, &g, extra.as_ref(), &common, out)
        }
        ConstructKind::Binary { group, d, common } => {
            let h = group_flag(&group)?;
            if !h.is_binary() || h.order() % 4 != 0 {
                return Err(Failure::Usage(format!(
                    "{} must be binary of order divisible by 4",
                    h.name()
                )));
            }
            if d < 3 || d % 2 == 0 {
                return Err(Failure::Usage(format!(
                    "--d must be odd and at least 3, got {d}"
                )));
            }
            let extra = common.assert_group.as_deref().map(group_flag).transpose()?;
            let built = construct_binary_unchecked(&h, d, common.search.budget())?;
            let aut = automorphism_group(&built.system)?;
            let iso = isomorphic_to(&aut, &h)?;
            out.stdout.push_str(&built.trace_report(Some((&aut, iso))));
            finish(&built.system, &aut, iso, &h, extra.as_ref(), &common, out)
        }
    }
}

fn finish(
    system: &CycleSystem,
    aut: &PermGroup,
    iso: bool,
    target: &FiniteGroup,
    extra: Option<&FiniteGroup>,
    common: &ConstructArgs,
    out: &mut Output,
) -> Result<(), Failure> {
    if !iso {
        let msg = format!(
            "automorphism group (order {}, {}) is not isomorphic to {}",
            aut.order(),
            classify(aut, system.v()),
            target.name()
        );
        if common.no_assert {
            out.stderr.push_str(&format!("warning: {msg}\n"));
        } else {
            return Err(Failure::Domain(msg));
        }
    }
    if let Some(g) = extra {
        if !isomorphic_to(aut, g)? {
            return Err(Failure::Domain(format!(
                "automorphism group is not isomorphic to {}",
                g.name()
            )));
        }
    }
    emit_system(system, common.output.as_deref(), out)
}

fn parse_relabel_map(map: &str) -> Result<Vec<(u32, u32)>, String> {
    let pairs = map
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (a, b) = item
                .split_once(':')
                .ok_or_else(|| format!("expected A:B, found {item:?}"))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| format!("bad label {s:?}"))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let mut from: Vec<u32> = pairs.iter().map(|p| p.0).collect();
    let mut to: Vec<u32> = pairs.iter().map(|p| p.1).collect();
    from.sort_unstable();
    to.sort_unstable();
    if from.windows(2).any(|w| w[0] == w[1]) || from != to {
        return Err("the map must be a permutation of the labels it mentions".into());
    }
    Ok(pairs)
}
