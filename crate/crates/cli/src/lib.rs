//! Command-line harness over the `qdarwin` library: scenario configuration,
//! experiment execution, CSV emission, plot-script generation, and the
//! embedded acceptance suite.

pub mod config;
pub mod error;
pub mod plot;
pub mod run;
pub mod selftest;
pub mod table;

use config::CommandKind;

pub const USAGE: &str = "\
qdarwin — decoherence and environment-fragment experiments

USAGE:
  qdarwin <COMMAND> [--key value ...] [--config FILE]

COMMANDS:
  mach-zehnder    two-path interferometer with an optional which-path detector
                  (--detector on|off, --gamma G, --gamma-grid K, --emit-plot F)
  eraser          post-selected erasure of the which-path record
                  (--outcome plus|minus|both)
  cat             cat-photon coherence decay over 0..n photons
                  (--n N, --gamma G)
  spam            perfect-record fragments of a system qubit
                  (--n N, --alpha A; input is A|up> + sqrt(1-A^2)|down>)
  partial-record  tunable-quality records (--n N, --theta T, --theta-grid K)
  pointer-sieve   post-channel purity over a Bloch grid of pure inputs
                  (--model spam|partial-record|random, --n N, --theta T,
                   --depth D, --resolution R)
  info-curve      mean system-fragment mutual information per subset size
                  (--n N, --alpha A, --delta D, --subset-cap C; needs --seed)
  mp-fit          closest measure-and-prepare channel to one fragment channel
                  (--model ..., --n N, --fragment J, --resolution R)
  emergence       negativity and fit distance of fragment channels versus n
                  (--n-min A, --n-max B, --seeds S, --depth D, --detail;
                   needs --seed)
  selftest        run the embedded acceptance suite (--quick: anchored checks
                  only); exits 1 on any failure

GLOBALS:
  --output PATH        write CSV to PATH instead of stdout
  --seed U64           master seed (mandatory for stochastic commands)
  --budget-qubits N    dense dimension budget in qubits (default 12)
  --threads N          sweep thread count (0 = all cores); output is
                       schedule-independent
  --config FILE        line-oriented `key = value` defaults; flags win
  --emit-plot PATH     also write a matplotlib script (mach-zehnder,
                       info-curve, emergence; requires --output)

EXIT CODES:
  0 success, 2 configuration error, 3 dimension budget exceeded,
  4 internal invariant violation, 1 selftest failure.
";

/// Entry point shared by `main` and the process-level tests.
pub fn run_main(args: &[String]) -> i32 {
    if args.is_empty() {
        eprint!("{USAGE}");
        return 2;
    }
    if args[0] == "--help" || args[0] == "-h" || args[0] == "help" {
        print!("{USAGE}");
        return 0;
    }
    let config = match config::parse_config(args) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    eprintln!("resolved: {}", config::describe(&config));
    if config.command == CommandKind::Selftest {
        return selftest::run_cli(config.quick);
    }
    // A panic anywhere below is a broken internal invariant: report it on the
    // documented exit code instead of the generic panic status.
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run::run(&config))) {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("{e}");
            e.exit_code()
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            eprintln!("invariant violation: {msg}");
            4
        }
    }
}
