// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

mod config;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use agreementforge::app::{evaluate_and_record, Error};
use agreementforge::contract::{Price, Timestamp};
use agreementforge::demo::{seed_demo, StepClock, DEMO_START};
use agreementforge::ledger::{
    export_abox, verify_chain, Command, DirLock, Episode, Ledger, LedgerError, LOG_FILE,
};
use agreementforge::ns;
use agreementforge::query::{answer_table, Table};
use agreementforge::rdf::{parse_turtle, serialize_turtle, Graph, Iri};
use agreementforge::vocab::ontology_documents;

use config::{CliConfig, CONFIG_FILE};

#[derive(Debug, Parser)]
#[command(
    name = "agreementforge",
    version,
    about = "Ride-sharing agreements as ontological smart contracts"
)]
struct Cli {
    /// Ledger directory (overrides config and AF_LEDGER_DIR).
    #[arg(long, global = true)]
    ledger_dir: Option<PathBuf>,
    /// Timestamp for records written by this run (RFC 3339, UTC).
    #[arg(long, global = true)]
    now: Option<String>,
    /// Config file; defaults to ./agreementforge.toml when present.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Write terms.ttl, rb-events.ttl and agreements.ttl.
    EmitOntology {
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Create an empty ledger.
    Init,
    /// Register a contract from a Turtle file.
    RegisterContract { file: PathBuf },
    /// Declare a transport service provider.
    RegisterOperator { operator: String },
    /// Record a ride offered by a driver.
    RecordRide {
        #[arg(long)]
        ride: String,
        #[arg(long)]
        driver: String,
        #[arg(long)]
        seats: u32,
    },
    /// Book seats on a ride for a passenger.
    Book(BookArgs),
    /// Record a taxonomy event against a booking.
    Event {
        #[arg(long)]
        booking: String,
        #[arg(long)]
        event: String,
    },
    /// Bind a contract's entries, e.g. --bind passenger=ag:p1.
    Instantiate {
        #[arg(long)]
        contract: String,
        #[arg(long = "bind", value_parser = parse_binding)]
        bindings: Vec<(String, String)>,
    },
    /// Fire every conditional with new matches and record the obligations.
    Evaluate,
    /// Answer a competency question over the exported A-Box.
    Query {
        #[command(subcommand)]
        cq: QueryCmd,
        /// RFC 4180 CSV instead of a text table.
        #[arg(long, global = true)]
        csv: bool,
    },
    /// Write the ledger's A-Box as Turtle.
    Export {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the hash chain.
    Verify,
    /// Seed the demo scenario into a fresh ledger.
    Demo {
        /// Also run evaluate after seeding.
        #[arg(long)]
        evaluate: bool,
    },
}

#[derive(Debug, Args)]
struct BookArgs {
    #[arg(long)]
    booking: String,
    #[arg(long)]
    passenger: String,
    #[arg(long)]
    ride: String,
    /// Price in minor units.
    #[arg(long)]
    price: u64,
    #[arg(long)]
    currency: Option<String>,
    #[arg(long)]
    origin: String,
    #[arg(long)]
    destination: String,
    /// Add a non-ridesharing episode from the destination to this stop.
    #[arg(long)]
    onward_to: Option<String>,
    #[arg(long, default_value_t = 1)]
    seats: u32,
}

#[derive(Debug, Subcommand)]
enum QueryCmd {
    /// Origin and destination of a booking's ridesharing leg.
    Cq1 {
        #[arg(long)]
        booking: String,
    },
    /// Agreed price of a booking.
    Cq2 {
        #[arg(long)]
        booking: String,
    },
    /// Seats declared for a ride.
    Cq3 {
        #[arg(long)]
        ride: String,
    },
    /// Incentives involving a provider.
    Cq4 {
        #[arg(long)]
        tsp: String,
    },
    /// Conditions of an incentive.
    Cq5 {
        #[arg(long)]
        incentive: String,
    },
    /// Benefit of an incentive.
    Cq6 {
        #[arg(long)]
        incentive: String,
    },
}

fn parse_binding(text: &str) -> Result<(String, String), String> {
    text.split_once('=')
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .ok_or_else(|| format!("expected name=IRI, got {text:?}"))
}

fn iri(text: &str) -> Result<Iri, Error> {
    ns::expand(text).ok_or_else(|| Error::Usage(format!("not an IRI or known CURIE: {text}")))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Ledger(LedgerError::Io(format!("{}: {e}", path.display())))
}

struct Ctx {
    cfg: CliConfig,
    now: Option<Timestamp>,
}

impl Ctx {
    fn log_path(&self) -> PathBuf {
        self.cfg.ledger_dir.join(LOG_FILE)
    }

    fn now(&self) -> Timestamp {
        self.now.clone().unwrap_or_else(|| self.cfg.now())
    }

    fn read(&self) -> Result<Ledger, Error> {
        Ok(Ledger::open(&self.log_path())?)
    }

    /// Runs `f` against the ledger under the directory lock.
    fn write<T>(
        &self,
        f: impl FnOnce(&mut Ledger, Timestamp) -> Result<T, Error>,
    ) -> Result<T, Error> {
        let _lock = DirLock::acquire(&self.cfg.ledger_dir)?;
        let mut ledger = self.read()?;
        f(&mut ledger, self.now())
    }

    fn append(&self, cmd: Command) -> Result<String, Error> {
        self.write(|ledger, now| {
            let r = ledger.append(cmd, now)?;
            Ok(format!("record {} {}", r.seq, r.hash))
        })
    }

    fn abox(&self) -> Result<Graph, Error> {
        Ok(export_abox(self.read()?.state()))
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn emit_ontology(out: &Path) -> Result<String, Error> {
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let mut lines = Vec::new();
    for (name, g) in ontology_documents() {
        write_file(&out.join(name), &serialize_turtle(&g))?;
        lines.push(format!("{name}: {} triples", g.len()));
    }
    Ok(lines.join("\n"))
}

fn render(table: Table, csv: bool) -> String {
    if csv {
        table.render_csv()
    } else {
        table.render_text()
    }
}

fn query(ctx: &Ctx, cq: &QueryCmd, csv: bool) -> Result<String, Error> {
    let (question, subject) = match cq {
        QueryCmd::Cq1 { booking } => ("cq1", booking),
        QueryCmd::Cq2 { booking } => ("cq2", booking),
        QueryCmd::Cq3 { ride } => ("cq3", ride),
        QueryCmd::Cq4 { tsp } => ("cq4", tsp),
        QueryCmd::Cq5 { incentive } => ("cq5", incentive),
        QueryCmd::Cq6 { incentive } => ("cq6", incentive),
    };
    let table = answer_table(&ctx.abox()?, question, &iri(subject)?)?;
    Ok(render(table, csv))
}

fn init(ctx: &Ctx) -> Result<String, Error> {
    let dir = &ctx.cfg.ledger_dir;
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let _lock = DirLock::acquire(dir)?;
    Ledger::create(&ctx.log_path())?;
    Ok(format!("initialized {}", ctx.log_path().display()))
}

fn run(cli: Cli) -> Result<String, Error> {
    let config_file = match &cli.config {
        Some(p) => Some(p.clone()),
        None => Some(PathBuf::from(CONFIG_FILE)).filter(|p| p.exists()),
    };
    let mut cfg = CliConfig::load(config_file.as_deref(), |k| std::env::var(k).ok())?;
    if let Some(dir) = cli.ledger_dir {
        cfg.ledger_dir = dir;
    }
    let now = cli
        .now
        .as_deref()
        .map(Timestamp::parse)
        .transpose()
        .map_err(|e| Error::Usage(format!("--now: {e}")))?;
    let ctx = Ctx { cfg, now };

    match &cli.command {
        Cmd::EmitOntology { out } => emit_ontology(out),
        Cmd::Init => init(&ctx),
        Cmd::RegisterContract { file } => {
            let turtle = fs::read_to_string(file).map_err(|e| io_err(file, e))?;
            parse_turtle(&turtle)?;
            ctx.append(Command::RegisterContract { turtle })
        }
        Cmd::RegisterOperator { operator } => ctx.append(Command::RegisterOperator {
            operator: iri(operator)?,
        }),
        Cmd::RecordRide {
            ride,
            driver,
            seats,
        } => ctx.append(Command::RecordRide {
            ride: iri(ride)?,
            driver: iri(driver)?,
            allocated_seats: *seats,
        }),
        Cmd::Book(b) => {
            let booking = iri(&b.booking)?;
            let currency = b
                .currency
                .clone()
                .unwrap_or_else(|| ctx.cfg.default_currency.to_string());
            let mut episodes = vec![Episode {
                iri: booking.derive("-leg"),
                ridesharing: true,
                origin: b.origin.clone(),
                destination: b.destination.clone(),
            }];
            if let Some(to) = &b.onward_to {
                episodes.push(Episode {
                    iri: booking.derive("-rail"),
                    ridesharing: false,
                    origin: b.destination.clone(),
                    destination: to.clone(),
                });
            }
            ctx.append(Command::RecordBooking {
                booking,
                passenger: iri(&b.passenger)?,
                price: Price::new(b.price, &currency)?,
                ride: iri(&b.ride)?,
                episodes,
                reserved_seats: b.seats,
            })
        }
        Cmd::Event { booking, event } => ctx.append(Command::RecordEvent {
            booking: iri(booking)?,
            event: iri(event)?,
        }),
        Cmd::Instantiate { contract, bindings } => {
            let bindings = bindings
                .iter()
                .map(|(k, v)| Ok((k.clone(), iri(v)?)))
                .collect::<Result<BTreeMap<_, _>, Error>>()?;
            ctx.append(Command::CreateInstance {
                contract: iri(contract)?,
                bindings,
            })
        }
        Cmd::Evaluate => ctx.write(|ledger, now| {
            let fresh = evaluate_and_record(ledger, &now)?;
            let mut lines: Vec<String> = fresh.iter().map(|o| o.to_string()).collect();
            lines.push(format!("{} new obligations", fresh.len()));
            Ok(lines.join("\n"))
        }),
        Cmd::Query { cq, csv } => query(&ctx, cq, *csv),
        Cmd::Export { out } => {
            let text = serialize_turtle(&ctx.abox()?);
            match out {
                Some(path) => write_file(path, &text).map(|_| format!("wrote {}", path.display())),
                None => Ok(text.trim_end().to_string()),
            }
        }
        Cmd::Verify => {
            let path = ctx.log_path();
            let bytes = fs::read(&path).map_err(|e| io_err(&path, e))?;
            let records = verify_chain(&bytes).map_err(|f| LedgerError::Integrity {
                seq: f.seq,
                reason: f.reason,
            })?;
            let head = records.last().map_or("(empty)", |r| r.hash.as_str());
            Ok(format!("ok: {} records, head {head}", records.len()))
        }
        Cmd::Demo { evaluate } => {
            init(&ctx)?;
            let start = ctx
                .now
                .clone()
                .unwrap_or_else(|| Timestamp::parse(DEMO_START).expect("constant"));
            let mut clock = StepClock::starting_at(&start);
            ctx.write(|ledger, _| {
                seed_demo(ledger, &mut clock)?;
                let mut out = format!("seeded {} records", ledger.records().len());
                if *evaluate {
                    let n = evaluate_and_record(ledger, &clock.tick())?.len();
                    out.push_str(&format!("\n{n} new obligations"));
                }
                Ok(out)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            if !text.is_empty() && !text.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
