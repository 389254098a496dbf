//! Writes the bundled synthetic meshes and their construction record: for each
//! mesh, the corner vertices and class of every hexahedron placed.
//!
//! Usage: `cargo run --release --example synthetic_meshes -- DATA_DIR`, where
//! `DATA_DIR` holds a manifest with a catalog and realizations.

use std::collections::BTreeMap;
use std::path::PathBuf;

use hextet::meshscan::{disjoint_mesh, grid_mesh, SyntheticMesh};
use hextet::pipeline::Manifest;
use hextet::realize::Realization;
use hextet::triangulation::Triangulation;
use hextet::Catalog;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Cell {
    corners: [usize; 8],
    class_id: String,
}

#[derive(Serialize)]
struct Record {
    file: String,
    cells: Vec<Cell>,
}

fn record(catalog: &Catalog, file: &str, s: &SyntheticMesh) -> Record {
    let cells = s
        .cells
        .iter()
        .map(|(corners, t)| Cell {
            corners: *corners,
            class_id: catalog.lookup(t).expect("catalog member").id.clone(),
        })
        .collect();
    Record { file: file.into(), cells }
}

fn main() -> hextet::Result<()> {
    let data = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    let manifest = Manifest::load(&data)?;
    let path = |role: &str| manifest.path(&data, role).ok_or_else(|| hextet::Error::Schema(format!("no {role} in manifest")));
    let catalog = Catalog::from_json(&std::fs::read_to_string(path("catalog")?)?)?;
    let realizations: Vec<Realization> = serde_json::from_str(&std::fs::read_to_string(path("realizations")?)?)?;
    let labeled = catalog.labeled_triangulations()?;
    let out = data.join("meshes");
    std::fs::create_dir_all(&out)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut construction = BTreeMap::new();

    let five: Vec<Triangulation> = labeled.iter().filter(|t| t.len() == 5).cloned().collect();
    let glued = grid_mesh([2, 1, 1], &five, 0.0, &mut rng)?.expect("5-tet cells glue");
    std::fs::write(out.join("glued-5tet.mesh"), glued.mesh.to_medit())?;
    construction.insert("glued-5tet", record(&catalog, "glued-5tet.mesh", &glued));

    let hexes: Vec<_> = realizations
        .iter()
        .map(|r| {
            let p: [[f64; 3]; 8] = std::array::from_fn(|i| r.points[i].clone().map(|c| c.to_f64()));
            Ok((p, Triangulation::from_label_lists(&r.tets)?))
        })
        .collect::<hextet::Result<_>>()?;
    let realized = disjoint_mesh(&hexes, &mut rng)?;
    std::fs::write(out.join("realized-disjoint.mesh"), realized.mesh.to_medit())?;
    construction.insert("realized-disjoint", record(&catalog, "realized-disjoint.mesh", &realized));

    let grid = grid_mesh([3, 2, 2], &labeled, 0.1, &mut rng)?.expect("every surface has a filling");
    let (node, ele) = grid.mesh.to_tetgen(1);
    std::fs::write(out.join("grid-3x2x2.node"), node)?;
    std::fs::write(out.join("grid-3x2x2.ele"), ele)?;
    construction.insert("grid-3x2x2", record(&catalog, "grid-3x2x2.ele", &grid));

    std::fs::write(out.join("construction.json"), serde_json::to_string(&construction)? + "\n")?;
    Ok(())
}
