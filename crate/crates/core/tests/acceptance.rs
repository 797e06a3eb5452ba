//! One line per acceptance criterion. Criteria 1-10 gate the exit status;
//! criterion 11 (q = 4) is reported but never fails the run. Set
//! `G2COVER_SKIP_STRETCH=1` to leave it out.

use g2cover::acceptance::{run, CRITERIA};

fn main() {
    let skip_stretch = std::env::var_os("G2COVER_SKIP_STRETCH").is_some();
    let mut failed = Vec::new();
    for &(id, _, gating, _) in &CRITERIA {
        if !gating && skip_stretch {
            println!("criterion {id:>2} SKIP (non-gating): G2COVER_SKIP_STRETCH is set");
            continue;
        }
        let r = run(id);
        println!("{}", r.line());
        if r.gating && !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all gating criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
