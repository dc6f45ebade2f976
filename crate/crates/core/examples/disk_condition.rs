//! Condition numbers of DSM, MFS and DSM-QR on the unit disk as `N` grows.
//!
//! Run with `cargo run --example disk_condition`.

use dsmqr::complexgeom::{build_layout, ConformalMap};
use dsmqr::solver::{assemble, cond2, cond2_closed_form, Method};
use dsmqr::{DiskParams, Result};

fn main() -> Result<()> {
    let map = ConformalMap::Identity;
    let radius = 1.5;
    println!(
        "{:>4} {:>14} {:>14} {:>20} {:>20}",
        "N", "dsm", "mfs", "dsm-qr", "2/(1+k^(N-2))"
    );
    for n in (5..=65).step_by(10) {
        let params = DiskParams::new(1.0, radius, n, 1)?;
        let layout = build_layout(&map, n, n, 1.0, radius)?;
        let zero = vec![0.0; n];
        let mut cells = Vec::new();
        for method in [Method::Dsm, Method::Mfs, Method::DsmQr] {
            let system = assemble(method, &params, &layout, &map, &zero)?;
            cells.push(cond2(&system.g).to_string());
        }
        println!(
            "{n:>4} {:>14} {:>14} {:>20} {:>20.16}",
            cells[0],
            cells[1],
            cells[2],
            cond2_closed_form(&params)
        );
    }
    Ok(())
}
