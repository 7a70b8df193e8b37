//! Runs verification suites in-process and prints the JSON report.

use ncurrents::report::{Command, RunConfig};
use ncurrents::suites::cmd_verify;

fn main() -> ncurrents::Result<()> {
    let mut cfg = RunConfig::new(Command::Verify, "so:3");
    cfg.deg = 3;
    cfg.unital = true;
    cfg.seed = 42;
    cfg.suite = "bounds-chain,closed-forms,cartan-classical".into();
    let report = cmd_verify(&cfg)?;
    print!("{}", report.to_text());
    println!("exit code would be {}", report.exit_code());
    let json = report.to_json();
    println!("{}", &json[..json.len().min(600)]);
    Ok(())
}
