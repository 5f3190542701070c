//! Argument parsing, manifest merging, output and exit codes.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::error::{CliError, EXIT_OK, EXIT_USAGE};
use crate::manifest::{Command, ExperimentManifest};

#[derive(Debug, Parser)]
#[command(name = "pathex", version, about = "Path densities of edge measures, planar copy counts and bound checks")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args)]
struct CommandArgs {
    /// JSON or TOML manifest; flags override its fields.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[command(flatten)]
    flags: ExperimentManifest,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Maximize a density over measures on K_n.
    Optimize(CommandArgs),
    /// Run the bound-envelope suite; exits 4 if any check fails.
    Certify(CommandArgs),
    /// Blow-up path counts against the conjectured leading term.
    Construct(CommandArgs),
    /// Exhaustive maximum copy count over small planar graphs.
    Oracle(CommandArgs),
    /// Evaluate a density on a given measure.
    Evaluate(CommandArgs),
    /// Run the pipeline named by the manifest's `command` field.
    Run {
        manifest: PathBuf,
        #[command(flatten)]
        flags: ExperimentManifest,
    },
}

fn resolve(sub: Sub) -> Result<ExperimentManifest, CliError> {
    let (command, file, flags) = match sub {
        Sub::Optimize(a) => (Some(Command::Optimize), a.manifest, a.flags),
        Sub::Certify(a) => (Some(Command::Certify), a.manifest, a.flags),
        Sub::Construct(a) => (Some(Command::Construct), a.manifest, a.flags),
        Sub::Oracle(a) => (Some(Command::Oracle), a.manifest, a.flags),
        Sub::Evaluate(a) => (Some(Command::Evaluate), a.manifest, a.flags),
        Sub::Run { manifest, flags } => (None, Some(manifest), flags),
    };
    let base = match &file {
        Some(path) => ExperimentManifest::load(path)?,
        None => ExperimentManifest::default(),
    };
    if let (Some(c), Some(declared)) = (command, base.command) {
        if c != declared {
            return Err(CliError::Usage(format!("manifest is for {}, not {}", declared.name(), c.name())));
        }
    }
    let mut merged = base.overlay(&flags);
    merged.command = command.or(merged.command);
    Ok(merged)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("PATHEX_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("PATHEX_THREADS must be a positive integer, got {raw:?}")))?;
    // a pool may already exist when called repeatedly in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn execute(manifest: &ExperimentManifest, stdout: &mut dyn Write) -> Result<(), CliError> {
    let report = commands::run(manifest)?;
    let text = report.render(manifest.format())?;
    match &manifest.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    if report.failures > 0 {
        return Err(CliError::Envelope { failed: report.failures });
    }
    Ok(())
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            let _ = writeln!(stderr, "{}", err.to_json());
            return EXIT_USAGE;
        }
    };
    let outcome = configure_threads().and_then(|()| resolve(cli.command)).and_then(|m| execute(&m, stdout));
    match outcome {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let _ = writeln!(stderr, "{}", err.to_json());
            err.exit_code()
        }
    }
}
