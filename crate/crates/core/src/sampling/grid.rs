/// Uniform bucket grid over a set of planar points for fixed-radius queries.
///
/// Cells are at least `r` wide, so every point within distance `r` of a query
/// lies in the query's cell or one of its eight neighbors.
#[derive(Debug, Clone)]
pub struct SpatialGrid<'a> {
    points: &'a [[f64; 2]],
    r: f64,
    origin: [f64; 2],
    cell: f64,
    cols: usize,
    cells: Vec<Vec<u32>>,
}

impl<'a> SpatialGrid<'a> {
    pub fn new(points: &'a [[f64; 2]], r: f64) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        if points.is_empty() {
            lo = [0.0; 2];
            hi = [1.0; 2];
        }
        let width = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
        // cap the column count so tiny radii do not allocate huge grids
        let cap = ((points.len() as f64).sqrt() as usize * 2).max(1);
        let cols = if r > 0.0 {
            ((width / r).floor() as usize).clamp(1, cap)
        } else {
            cap
        };
        let cell = width / cols as f64;
        let mut grid = SpatialGrid {
            points,
            r,
            origin: lo,
            cell,
            cols,
            cells: vec![Vec::new(); cols * cols],
        };
        for (i, p) in points.iter().enumerate() {
            let c = grid.cell_of(p);
            grid.cells[c.1 * cols + c.0].push(i as u32);
        }
        grid
    }

    fn cell_of(&self, p: &[f64; 2]) -> (usize, usize) {
        let idx = |d: usize| {
            let x = ((p[d] - self.origin[d]) / self.cell).floor();
            (x.max(0.0) as usize).min(self.cols - 1)
        };
        (idx(0), idx(1))
    }

    /// Calls `f(j)` for every point `j` (the query point included) with
    /// `|x_i - x_j| <= r`. Order is unspecified.
    pub fn for_each_within(&self, i: usize, mut f: impl FnMut(usize)) {
        let p = self.points[i];
        let (cx, cy) = self.cell_of(&p);
        let r2 = self.r * self.r;
        // when r exceeds one cell (grid capped), scan a wider window
        let reach = if self.r > 0.0 {
            (self.r / self.cell).ceil() as usize
        } else {
            0
        }
        .max(1);
        let x0 = cx.saturating_sub(reach);
        let x1 = (cx + reach).min(self.cols - 1);
        let y0 = cy.saturating_sub(reach);
        let y1 = (cy + reach).min(self.cols - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                for &j in &self.cells[y * self.cols + x] {
                    let q = self.points[j as usize];
                    let (dx, dy) = (p[0] - q[0], p[1] - q[1]);
                    if dx * dx + dy * dy <= r2 {
                        f(j as usize);
                    }
                }
            }
        }
    }

    /// `N_r(i)`: points within distance `r` of point `i`, itself included.
    pub fn count_within(&self, i: usize) -> usize {
        let mut c = 0;
        self.for_each_within(i, |_| c += 1);
        c
    }
}
