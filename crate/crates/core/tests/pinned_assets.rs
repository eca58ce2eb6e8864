//! Reruns the published similarity figures when `SLLM_PINNED_ASSETS` is set.

mod common;

use common::pinned::{pinned_assets, Verdict};

#[test]
fn published_figures_on_pinned_assets() {
    match pinned_assets() {
        Ok(Verdict::Pass(m)) => println!("PASS: {m}"),
        Ok(Verdict::Skip(m)) => println!("SKIP: {m}"),
        Ok(Verdict::Fail(m)) | Err(m) => panic!("FAIL: {m}"),
    }
}
