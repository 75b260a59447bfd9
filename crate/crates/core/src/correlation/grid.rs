/// Uniform cell list over floating-point shadows of the points.
///
/// Any two points closer than `cell` sit in the same or adjacent cells, so a
/// 3×3 sweep finds every candidate; candidates are confirmed exactly by the
/// caller.
pub(crate) struct CellGrid {
    min: (f64, f64),
    cell: f64,
    nx: usize,
    ny: usize,
    start: Vec<u32>,
    items: Vec<u32>,
}

const MAX_CELLS_PER_AXIS: f64 = 4096.0;

impl CellGrid {
    pub(crate) fn new(points: &[(f64, f64)], radius: f64) -> Self {
        let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for &(x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if points.is_empty() {
            lo = (0.0, 0.0);
            hi = (0.0, 0.0);
        }
        let extent = (hi.0 - lo.0).max(hi.1 - lo.1);
        // slack for rounding in the shadows; bigger cells stay correct
        let cell = (radius * (1.0 + 1e-9) + 1e-9).max(extent / MAX_CELLS_PER_AXIS);
        let nx = ((hi.0 - lo.0) / cell) as usize + 1;
        let ny = ((hi.1 - lo.1) / cell) as usize + 1;

        let mut grid = CellGrid {
            min: lo,
            cell,
            nx,
            ny,
            start: vec![0; nx * ny + 1],
            items: vec![0; points.len()],
        };
        let ids: Vec<usize> = points.iter().map(|&p| grid.cell_of(p)).collect();
        for &c in &ids {
            grid.start[c + 1] += 1;
        }
        for c in 0..nx * ny {
            grid.start[c + 1] += grid.start[c];
        }
        let mut fill = grid.start.clone();
        for (i, &c) in ids.iter().enumerate() {
            grid.items[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid
    }

    fn coords(&self, p: (f64, f64)) -> (usize, usize) {
        let cx = (((p.0 - self.min.0) / self.cell) as usize).min(self.nx - 1);
        let cy = (((p.1 - self.min.1) / self.cell) as usize).min(self.ny - 1);
        (cx, cy)
    }

    fn cell_of(&self, p: (f64, f64)) -> usize {
        let (cx, cy) = self.coords(p);
        cy * self.nx + cx
    }

    /// Calls `f` with the indices stored in the 3×3 block around `p`.
    pub(crate) fn for_each_near(&self, p: (f64, f64), mut f: impl FnMut(&[u32])) {
        let (cx, cy) = self.coords(p);
        for y in cy.saturating_sub(1)..=(cy + 1).min(self.ny - 1) {
            let row = y * self.nx;
            let x0 = cx.saturating_sub(1);
            let x1 = (cx + 1).min(self.nx - 1);
            // cells of a row are contiguous in `items`
            let a = self.start[row + x0] as usize;
            let b = self.start[row + x1 + 1] as usize;
            f(&self.items[a..b]);
        }
    }
}
