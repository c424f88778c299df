//! Decode a hand-built syndrome-changes history containing all three
//! cluster types: a neutral pair, a boundary-neutral singleton, and two
//! charged defects that only merge once the connectivity doubles.
//!
//! ```text
//! cargo run --example decode_walkthrough
//! ```

use qudit_hdrg::hdrg::{decode_with_trace, DecoderConfig};
use qudit_hdrg::history::{project_correction, ChangesHistory, Defect, GridDims};
use qudit_hdrg::lattice::{CodeGeometry, QuditDim};

fn main() {
    let geometry = CodeGeometry::new(5).unwrap();
    let dim = QuditDim::new(5).unwrap();
    let dims = GridDims {
        steps: 5,
        cols: 5,
        rows: 4,
    };
    let defects = vec![
        // A neutral pair: charges 1 + 4 = 0 mod 5, one step apart.
        Defect {
            t: 1,
            x: 1,
            y: 2,
            charge: 1,
        },
        Defect {
            t: 1,
            x: 1,
            y: 3,
            charge: 4,
        },
        // A lone charge on the south row: absorbed by the boundary.
        Defect {
            t: 2,
            x: 3,
            y: 0,
            charge: 2,
        },
        // Complementary charges two steps apart: charged at delta 1,
        // neutral as a pair once delta reaches 2.
        Defect {
            t: 3,
            x: 2,
            y: 2,
            charge: 2,
        },
        Defect {
            t: 3,
            x: 4,
            y: 2,
            charge: 3,
        },
    ];
    let changes = ChangesHistory::from_defects(dims, dim, defects);
    println!("input defects:\n{}", changes.to_json());

    let (corrections, trace) =
        decode_with_trace(&changes, &geometry, &DecoderConfig::fault_tolerant());
    for level in &trace.levels {
        println!(
            "level {} (delta {}): {} clusters, {} fused, {} defects left",
            level.level, level.delta, level.clusters, level.fused, level.defects_after
        );
    }
    let projected = project_correction(&corrections, &geometry, dim);
    println!(
        "projected correction acts on {} edges (time-like fusions are free)",
        projected.weight()
    );
}
