//! Deterministic text renderers: spiral grids and the three-level tree.

use serde::Serialize;

use crate::encoding::{block_range, Hierarchy, LevelSequence};
use crate::error::{Error, Result};

/// A square arrangement of the first side^2 sequence values: element 0
/// at the center, subsequent elements placed counterclockwise starting
/// rightward (runs R, U, LL, DD, RRR, ...).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpiralGrid {
    side: usize,
    /// Row-major cells.
    cells: Vec<u64>,
}

impl SpiralGrid {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.cells[row * self.side + col]
    }

    /// Right-aligned rows, single-space separated, one row per line.
    pub fn render_text(&self) -> String {
        let width = self.cells.iter().map(|c| c.to_string().len()).max().unwrap_or(1);
        let mut out = String::new();
        for row in 0..self.side {
            let line: Vec<String> = (0..self.side)
                .map(|col| format!("{:>width$}", self.get(row, col)))
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Cell coordinates visited by the spiral, in placement order.
pub fn spiral_coords(side: usize) -> Vec<(usize, usize)> {
    let total = side * side;
    let center = (side / 2) as isize;
    let mut coords = Vec::with_capacity(total);
    let (mut r, mut c) = (center, center);
    coords.push((r as usize, c as usize));
    // counterclockwise in display coordinates: right, up, left, down,
    // two runs per length
    const DIRS: [(isize, isize); 4] = [(0, 1), (-1, 0), (0, -1), (1, 0)];
    let mut dir = 0;
    let mut run = 1usize;
    while coords.len() < total {
        for _ in 0..2 {
            let (dr, dc) = DIRS[dir];
            for _ in 0..run {
                if coords.len() == total {
                    break;
                }
                r += dr;
                c += dc;
                debug_assert!(r >= 0 && c >= 0 && (r as usize) < side && (c as usize) < side);
                coords.push((r as usize, c as usize));
            }
            dir = (dir + 1) % 4;
        }
        run += 1;
    }
    coords
}

/// Arranges the first side^2 values of a sequence in a spiral. The side
/// must be odd (a center cell must exist) and the sequence long enough.
pub fn spiral(seq: &LevelSequence, side: usize) -> Result<SpiralGrid> {
    if side == 0 || side % 2 == 0 {
        return Err(Error::Config(format!("spiral side must be odd, got {side}")));
    }
    let total = side * side;
    if (total as u64) > seq.len() {
        return Err(Error::Range(format!(
            "spiral of side {side} needs {total} values, sequence has {}",
            seq.len()
        )));
    }
    let mut cells = vec![0u64; total];
    for (value, (row, col)) in seq.iter().take(total).zip(spiral_coords(side)) {
        cells[row * side + col] = value;
    }
    Ok(SpiralGrid { side, cells })
}

/// Renders the three-level tree rooted at level-3 block `n3`: the root,
/// its children, and the grandchildren of every child flagged in the
/// root pattern.
pub fn tree_text(hier: &Hierarchy, n3: u64) -> Result<String> {
    let params = hier.params();
    if params.levels() < 3 {
        return Err(Error::Config(format!(
            "tree rendering needs a 3-level hierarchy, got {} levels",
            params.levels()
        )));
    }
    let b = params.block_size();
    let bits = params.value_bits() as u64;
    let root = hier.value(3, n3)?;
    let mut out = String::new();
    let line = |level: u32, n: u64, value: u64| {
        let range = block_range(level, n, params);
        let indent = match level {
            3 => "",
            2 => "  ",
            _ => "    ",
        };
        format!("{indent}level {level}  block {n}  [{}, {}]  value {value}\n", range.start(), range.end())
    };
    out.push_str(&line(3, n3, root));
    for j in 0..b {
        let n2 = b * n3 + j;
        let v2 = hier.value(2, n2)?;
        out.push_str(&line(2, n2, v2));
        if (root >> (bits - 1 - j)) & 1 == 1 {
            for i in 0..b {
                let n1 = b * n2 + i;
                out.push_str(&line(1, n1, hier.value(1, n1)?));
            }
        }
    }
    Ok(out)
}
