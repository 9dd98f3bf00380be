use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command};
use multicorn_lab::commands::{self, COMMANDS};
use multicorn_lab::config::{self, Settings};
use multicorn_lab::LabError;

/// Keys that act as switches: `--baby` alone means `baby = true`.
const SWITCHES: &[&str] = &["baby", "csv"];

fn cli() -> Command {
    let mut app = Command::new("multicorn-lab")
        .about("Numerical experiments on multicorns, parabolic arcs and baby tricorns")
        .subcommand_required(true)
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("key = value settings file"))
        .arg(Arg::new("threads").long("threads").global(true).value_name("N").help("worker threads (else $MULTICORN_LAB_THREADS)"))
        .arg(Arg::new("out").long("out").global(true).value_name("DIR").help("output directory [default: .]"))
        .arg(Arg::new("precision").long("precision").global(true).value_name("MODE").help("double or double-double"));
    for spec in COMMANDS {
        let mut sub = Command::new(spec.name);
        for &key in spec.keys {
            let mut arg = Arg::new(key).long(key).value_name("VALUE");
            // negative numbers are values; switches must not swallow the next flag
            arg = if SWITCHES.contains(&key) {
                arg.num_args(0..=1).default_missing_value("true")
            } else {
                arg.allow_hyphen_values(true)
            };
            if let Some((_, d)) = spec.defaults.iter().find(|(k, _)| *k == key) {
                arg = arg.help(format!("[default: {d}]"));
            }
            sub = sub.arg(arg);
        }
        app = app.subcommand(sub);
    }
    app
}

fn flags(m: &ArgMatches, keys: &[&str]) -> Settings {
    let mut s = Settings::new();
    for &k in keys.iter().chain(["threads", "out", "precision"].iter()) {
        if let Ok(Some(v)) = m.try_get_one::<String>(k) {
            s.insert(k.to_string(), v.clone());
        }
    }
    s
}

fn execute(name: &str, m: &ArgMatches) -> Result<Option<String>, LabError> {
    let spec = commands::spec(name).ok_or_else(|| LabError::Config(format!("unknown command {name:?}")))?;
    let file = match m.get_one::<String>("config") {
        Some(p) => config::parse(&std::fs::read_to_string(p)?)?,
        None => Settings::new(),
    };
    let settings = config::merge(name, spec.keys, spec.defaults, &file, &flags(m, spec.keys))?;
    let out_dir = PathBuf::from(settings.get("out").map(String::as_str).unwrap_or("."));
    let output = commands::run(name, &settings)?;
    std::fs::create_dir_all(&out_dir)?;
    for (file, bytes) in &output.files {
        std::fs::write(out_dir.join(Path::new(file)), bytes)?;
    }
    std::fs::write(out_dir.join(format!("{name}.manifest")), config::manifest(&settings))?;
    print!("{}", output.stdout);
    Ok(output.failure)
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    // globals are propagated to the subcommand's matches
    match execute(name, sub) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
