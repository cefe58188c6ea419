//! Acceptance criteria 1-12. Pass criterion numbers as arguments to run a
//! subset; `ACCEPTANCE_SEED` overrides the sampling seed.

use std::process::ExitCode;

use blockweight::verify::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let seed = std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_241_017);
    let mut failed = 0;
    for (id, title) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        match run_criterion(id, seed) {
            Ok(out) => {
                println!("{}", out.line());
                for d in &out.details {
                    println!("    {d}");
                }
                failed += usize::from(!out.passed);
            }
            Err(e) => {
                println!("criterion {id:>2} [FAIL] {title}: error: {e}");
                failed += 1;
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
