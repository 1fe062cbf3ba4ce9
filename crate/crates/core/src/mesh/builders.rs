use super::{refine_uniform, BoundaryMarker, Mesh, TriMesh2D};

/// Acute triangulation of the unit square: 12 vertices, 14 triangles,
/// largest angle about 73.1 degrees. Red refinement keeps every angle, so
/// all refinements are acute as well.
pub fn unit_square_acute(marker: BoundaryMarker) -> TriMesh2D {
    let vertices = vec![
        [0.0, 0.0],
        [1.0, 0.0],
        [1.0, 1.0],
        [0.0, 1.0],
        [0.46, 0.0],
        [1.0, 0.54],
        [0.54, 1.0],
        [0.0, 0.46],
        [0.3, 0.3],
        [0.64, 0.36],
        [0.7, 0.7],
        [0.36, 0.64],
    ];
    let triangles = vec![
        [10, 5, 2],
        [6, 10, 2],
        [4, 8, 0],
        [8, 7, 0],
        [9, 5, 10],
        [9, 8, 4],
        [5, 9, 1],
        [9, 4, 1],
        [6, 11, 10],
        [8, 11, 7],
        [11, 6, 3],
        [7, 11, 3],
        [9, 11, 8],
        [11, 9, 10],
    ];
    TriMesh2D::with_uniform_boundary(vertices, triangles, marker)
        .expect("built-in square mesh is valid")
}

/// [`unit_square_acute`] after `levels` uniform red refinements.
pub fn unit_square_acute_refined(levels: usize, marker: BoundaryMarker) -> TriMesh2D {
    let mut m = Mesh::Triangle(unit_square_acute(marker));
    for _ in 0..levels {
        m = refine_uniform(&m);
    }
    match m {
        Mesh::Triangle(t) => t,
        Mesh::Interval(_) => unreachable!(),
    }
}

/// Triangular lattice of equilateral triangles with side `side`.
///
/// `rows` horizontal strips, each holding `2 * cols` triangles; odd rows of
/// vertices are shifted right by half a side.
pub fn equilateral_strip(cols: usize, rows: usize, side: f64, marker: BoundaryMarker) -> TriMesh2D {
    assert!(cols > 0 && rows > 0, "strip needs at least one cell");
    let height = side * 3f64.sqrt() / 2.0;
    let id = |i: usize, j: usize| j * (cols + 1) + i;
    let mut vertices = Vec::with_capacity((cols + 1) * (rows + 1));
    for j in 0..=rows {
        let shift = if j % 2 == 1 { 0.5 } else { 0.0 };
        for i in 0..=cols {
            vertices.push([side * (i as f64 + shift), height * j as f64]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * cols * rows);
    for j in 0..rows {
        for i in 0..cols {
            if j % 2 == 0 {
                triangles.push([id(i, j), id(i + 1, j), id(i, j + 1)]);
                triangles.push([id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            } else {
                triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
    }
    TriMesh2D::with_uniform_boundary(vertices, triangles, marker)
        .expect("equilateral lattice is valid")
}
