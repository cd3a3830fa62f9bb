//! Built-in demonstration scenarios: canned configurations covering the
//! toolkit's headline effects (focusing, rainbows, accumulative squeezing,
//! optimized sequences, 3D corona/glory, strong-pulse alignment).

use crate::config::{EngineKind, ExperimentConfig, Scenario};
use std::path::PathBuf;

pub struct CatalogEntry {
    pub id: &'static str,
    pub engine: EngineKind,
    pub description: &'static str,
}

/// Stable, ordered scenario catalog.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            id: "figure:1",
            engine: EngineKind::Quantum2d,
            description: "strong-kick (P=85) quantum densities: focus, rainbows and \
                          fractional revivals (nine snapshots)",
        },
        CatalogEntry {
            id: "figure:1b",
            engine: EngineKind::Quantum2d,
            description: "strong-kick (P=85) quantum density at the focal time 1/P",
        },
        CatalogEntry {
            id: "figure:2",
            engine: EngineKind::Classical2d,
            description: "single-kick classical map theta(theta_0) at 0.5, 1, 3 and 10 \
                          focal times",
        },
        CatalogEntry {
            id: "figure:3",
            engine: EngineKind::Quantum2d,
            description: "accumulative squeezing trace for P=3, 100 kicks (log-log power law)",
        },
        CatalogEntry {
            id: "figure:4",
            engine: EngineKind::Classical2d,
            description: "pulsed-lattice spatial distributions at 1 and 2.5 focal times, \
                          cold and thermal",
        },
        CatalogEntry {
            id: "figure:5",
            engine: EngineKind::Classical2d,
            description: "accumulative squeezing of lattice atoms at three temperatures \
                          (parallel log-log slopes)",
        },
        CatalogEntry {
            id: "figure:6",
            engine: EngineKind::Classical2d,
            description: "optimized four-pulse sequence: distributions at the second pulse, \
                          the merged double pulse, and the final squeeze",
        },
        CatalogEntry {
            id: "figure:7",
            engine: EngineKind::Classical3d,
            description: "thermal 3D rotor sphere densities at 0, 1, 3.3 and 5 focal times \
                          (hole, corona, ring, glory)",
        },
        CatalogEntry {
            id: "figure:8",
            engine: EngineKind::Quantum3d,
            description: "strong gaussian-pulse 3D alignment contour 2 pi sin(theta) |Psi|^2",
        },
        CatalogEntry {
            id: "figure:table1",
            engine: EngineKind::Classical2d,
            description: "accumulative vs optimized localization for 2..5 kicks (table rows)",
        },
    ]
}

/// Default config for a catalog id (accepts `figure:1b` or bare `1b`).
pub fn default_config(id: &str) -> Option<ExperimentConfig> {
    let bare = id.strip_prefix("figure:").unwrap_or(id);
    let entry = catalog()
        .into_iter()
        .find(|e| e.id == format!("figure:{bare}"))?;
    let particles = match bare {
        "7" => 2_000_000,
        "4" | "6" => 400_000,
        _ => 100_000,
    };
    Some(ExperimentConfig {
        engine: entry.engine,
        scenario: Scenario::Figure {
            id: bare.to_string(),
        },
        particles,
        sigma_omega: 0.0,
        seed: 1,
        grid_points: 512,
        output_dir: PathBuf::from(format!("out/figure-{}", bare.replace(':', "-"))),
    })
}
