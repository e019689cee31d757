//! `risgbsm` command line: run one study, write its CSV and a manifest.
//!
//! Outputs are written atomically. The manifest is itself a valid config
//! (metadata lines are comments), so `--config <manifest>` reruns the
//! exact same study.

use std::ffi::OsString;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::cascade::{compose_cir, AntennaElement, RisSetup};
use crate::config::{parse_config, RunConfig};
use crate::error::{Error, Result};
use crate::experiments::{run_asa_sweep, run_config_sweep, run_pattern_experiment, CsvRow, SweepResult};
use crate::gbsm::generate_subchannel;

#[derive(Debug, Parser)]
#[command(name = "risgbsm", version, about = "RIS-assisted cascaded channel simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file (`section.key = value` lines); defaults to the reference setup.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed, overrides `run.seed`.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Output directory, overrides `run.out_dir`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Include the 100x100 panel in the configuration sweep.
    #[arg(long, global = true)]
    full_scale: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Pattern cuts of the steered panel under both phase models.
    Pattern,
    /// SNR over carrier, panel side and strategy on LOS links.
    SnrSweep,
    /// SNR over Tx-RIS arrival spread, per seed and phase model.
    AsaSweep,
    /// Taps of one cascade realisation.
    DumpChannel,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Pattern => "pattern",
            Command::SnrSweep => "snr-sweep",
            Command::AsaSweep => "asa-sweep",
            Command::DumpChannel => "dump-channel",
        }
    }

    fn output(self) -> &'static str {
        match self {
            Command::Pattern => "pattern_cut.csv",
            Command::SnrSweep => "snr_sweep.csv",
            Command::AsaSweep => "asa_sweep.csv",
            Command::DumpChannel => "channel_dump.csv",
        }
    }
}

pub const DUMP_HEADER: &str = "p,q,tap_index,delay_s,amp_re,amp_im";

/// Files written by a run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub rows: usize,
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    match execute(&cli) {
        Ok(out) => {
            println!("wrote {} ({} rows)", out.csv.display(), out.rows);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("risgbsm: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Result<RunOutput>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Usage(e.to_string()))?;
    execute(&cli)
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => parse_config(&fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out
            .to_str()
            .ok_or_else(|| Error::Usage("output directory is not valid UTF-8".into()))?
            .to_string();
    }
    // re-check after the overrides
    parse_config(&cfg.serialize())
}

fn execute(cli: &Cli) -> Result<RunOutput> {
    let cfg = resolve(cli)?;
    let dir = PathBuf::from(&cfg.out_dir);
    fs::create_dir_all(&dir)?;
    let _lock = DirLock::acquire(&dir)?;

    let config_text = cfg.serialize();
    let config_hash = hex(&Sha256::digest(config_text.as_bytes()));
    let (csv, rows) = match cli.command {
        Command::Pattern => render(run_pattern_experiment(&cfg.pattern_setup()?)?, &cfg, &config_hash),
        Command::SnrSweep => render(
            run_config_sweep(&cfg.config_sweep_setup(cli.full_scale))?,
            &cfg,
            &config_hash,
        ),
        Command::AsaSweep => render(run_asa_sweep(&cfg.asa_sweep_setup()?)?, &cfg, &config_hash),
        Command::DumpChannel => dump_channel(&cfg)?,
    };

    let csv_path = dir.join(cli.command.output());
    write_atomic(&csv_path, csv.as_bytes())?;

    let mut manifest = String::new();
    manifest.push_str("# risgbsm run manifest\n");
    manifest.push_str(&format!("# version: {}\n", env!("CARGO_PKG_VERSION")));
    manifest.push_str(&format!("# command: {}\n", cli.command.name()));
    manifest.push_str(&format!("# full_scale: {}\n", cli.full_scale));
    manifest.push_str(&format!("# config_sha256: {config_hash}\n"));
    manifest.push_str(&format!("# output: {}\n", cli.command.output()));
    manifest.push_str(&format!("# output_sha256: {}\n", hex(&Sha256::digest(csv.as_bytes()))));
    manifest.push_str(&format!("# rows: {rows}\n"));
    manifest.push_str(&config_text);
    let manifest_path = dir.join(format!("manifest-{}.txt", cli.command.name()));
    write_atomic(&manifest_path, manifest.as_bytes())?;

    Ok(RunOutput {
        csv: csv_path,
        manifest: manifest_path,
        rows,
    })
}

fn render<R: CsvRow>(mut result: SweepResult<R>, cfg: &RunConfig, hash: &str) -> (String, usize) {
    result.seed = cfg.seed;
    result.config_hash = hash.to_string();
    (result.to_csv(), result.rows.len())
}

fn dump_channel(cfg: &RunConfig) -> Result<(String, usize)> {
    let site = cfg.site();
    let tx_ris = cfg.scenario_config(cfg.scenario.tx_ris_state);
    let ris_rx = cfg.scenario_config(cfg.scenario.ris_rx_state);
    let s1 = generate_subchannel(&tx_ris, site.tx, site.ris(), &mut tx_ris.rng_for(0))?;
    let s2 = generate_subchannel(&ris_rx, site.ris(), site.rx, &mut ris_rx.rng_for(1))?;
    let panel = cfg.panel(site.ris_pose)?;
    let (din, dout) = site.local_directions()?;
    let mask = cfg.strategy.mask(&panel, din, dout)?;
    let ant = [AntennaElement::isotropic_vertical()];
    let ch = compose_cir(
        &s1,
        &s2,
        RisSetup {
            panel: &panel,
            mask: &mask,
            model: cfg.model,
        },
        &ant,
        &ant,
    )?;
    let mut out = String::from(DUMP_HEADER);
    out.push('\n');
    let mut rows = 0;
    for p in 0..ch.num_rx {
        for q in 0..ch.num_tx {
            for (i, t) in ch.taps(p, q)?.iter().enumerate() {
                out.push_str(&format!("{p},{q},{i},{},{},{}\n", t.delay, t.amp.re, t.amp.im));
                rows += 1;
            }
        }
    }
    Ok((out, rows))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes to a sibling temp file and renames it into place.
fn write_atomic(path: &Path, data: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| Error::Usage(format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = File::create(&tmp)?;
        f.write_all(data)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// One run per output directory.
struct DirLock(PathBuf);

impl DirLock {
    const NAME: &'static str = ".risgbsm.lock";

    fn acquire(dir: &Path) -> Result<Self> {
        let path = dir.join(Self::NAME);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(DirLock(path))
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(Error::Locked(dir.display().to_string()))
            }
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}
