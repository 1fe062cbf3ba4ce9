//! Mesh geometry: angle extremes, the certificate constants of every
//! element, and their behaviour under red refinement.
//!
//! cargo run --example mesh_quality [-- path/to/file.mesh]

use qcert::mesh::{
    element_geometry, load_mesh, mesh_quality, refine_uniform, unit_square_acute, BoundaryMarker,
    Mesh,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut mesh: Mesh = match std::env::args().nth(1) {
        Some(path) => load_mesh(path)?,
        None => unit_square_acute(BoundaryMarker::Dirichlet).into(),
    };
    println!("{}", serde_json::to_string_pretty(&mesh_quality(&mesh))?);

    if let Some(tri) = mesh.as_triangle() {
        println!("\n elem      c_T      s_T      r_T      |T|");
        for e in 0..tri.triangles().len() {
            let g = element_geometry(tri, e)?;
            println!(
                "{e:5} {:8.4} {:8.4} {:8.4} {:8.5}",
                g.c_t, g.s_t, g.r_t, g.area
            );
        }
    }

    println!("\nlevel  elements  acute  max measure");
    for level in 0..4 {
        let q = mesh_quality(&mesh);
        let max_measure = (0..mesh.num_elements())
            .map(|e| mesh.measure(e))
            .fold(0.0, f64::max);
        println!("{level:5} {:9} {:>6} {max_measure:12.3e}", mesh.num_elements(), q.acute());
        mesh = refine_uniform(&mesh);
    }
    Ok(())
}
