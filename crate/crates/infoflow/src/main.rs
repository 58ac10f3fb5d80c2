use infoflow::config::parse_config;
use infoflow::error::Error;
use infoflow::prob::InfoValue;
use infoflow::runner::run;

const USAGE: &str = "\
infoflow - discretized information-flow experiments

USAGE:
    infoflow [--config FILE] [FLAGS]

FLAGS (override config-file values):
    --experiment KIND    bernoulli | sinebox | noise | te | ce | cmi-check
    --config FILE        flat JSON config file
    --delta-inv L        mesh resolution (cells per unit interval)
    --samples N          sample or trajectory budget
    --seed S             64-bit seed
    --dist SPEC          uniform | gaussian:MEAN,VAR | acip
    --d-range LO..HI     expansion-rate sweep for bernoulli
    --n-range LO..HI     frequency sweep for sinebox
    --epsilon LIST       comma-separated noise amplitudes
    --tau0 T             transient iterates discarded before sampling
    --out DIR            output directory (env INFOFLOW_OUT_DIR overrides)
    --plot               also emit an SVG panel

Exit codes: 0 success, 1 usage error, 2 internal-consistency failure.
";

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--help" || a == "-h") {
        print!("{USAGE}");
        return;
    }

    let config = match parse_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            eprintln!("run with --help for usage");
            std::process::exit(1);
        }
    };

    match run(&config) {
        Ok((report, files)) => {
            println!("# {}", report.title);
            println!(
                "# seed={} samples={} delta_inv={} wall_ms={}",
                report.meta.seed, report.meta.samples, report.meta.mesh_cells, report.meta.wall_ms
            );
            for row in &report.rows {
                let empirical = match row.empirical {
                    InfoValue::Finite(v) => format!("{v:.6}"),
                    InfoValue::Infinite => "inf-flag".into(),
                };
                let predicted = row
                    .predicted
                    .map(|p| format!("{p:.6}"))
                    .unwrap_or_else(|| "-".into());
                println!(
                    "{:>24}  empirical={empirical:>10}  predicted={predicted:>10}  {}",
                    row.param,
                    row.flags.join(";")
                );
            }
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        Err(Error::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            std::process::exit(1);
        }
        // The caller must coarsen the mesh; a configuration problem, not a
        // numerical one.
        Err(e @ Error::CapacityExceeded { .. }) => {
            eprintln!("usage error: {e}");
            std::process::exit(1);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
