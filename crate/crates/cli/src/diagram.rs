use std::fmt::Write;

use msset::sset::{CellId, Product, Simplex};

/// A product simplex drawn in the grid of its two base simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePath {
    pub width: usize,
    pub height: usize,
    pub points: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Right,
    Up,
    Diagonal,
}

impl Step {
    pub fn name(self) -> &'static str {
        match self {
            Step::Right => "right",
            Step::Up => "up",
            Step::Diagonal => "diagonal",
        }
    }
}

impl LatticePath {
    pub fn of(x: &Simplex, y: &Simplex) -> LatticePath {
        let points = x
            .degen
            .values()
            .iter()
            .zip(y.degen.values())
            .map(|(&a, &b)| (a, b))
            .collect();
        LatticePath {
            width: x.base_dim(),
            height: y.base_dim(),
            points,
        }
    }

    /// The path of cell `c` in the grid of vertices of the two factors,
    /// or in the grid of its base simplices when the vertex numbering is
    /// not monotone along the cell.
    pub fn in_product(p: &Product, c: CellId) -> LatticePath {
        let (x, y) = p.pair(c);
        let (vx, vy) = (p.left.vertices(x), p.right.vertices(y));
        let monotone = |v: &[CellId]| v.windows(2).all(|w| w[0] <= w[1]);
        if !monotone(&vx) || !monotone(&vy) {
            return LatticePath::of(x, y);
        }
        LatticePath {
            width: p.left.vertex_count().saturating_sub(1),
            height: p.right.vertex_count().saturating_sub(1),
            points: vx.into_iter().zip(vy).collect(),
        }
    }

    pub fn steps(&self) -> Vec<Step> {
        self.points
            .windows(2)
            .map(|w| match (w[1].0 > w[0].0, w[1].1 > w[0].1) {
                (true, false) => Step::Right,
                (false, true) => Step::Up,
                _ => Step::Diagonal,
            })
            .collect()
    }

    fn has_step(&self, from: (usize, usize), to: (usize, usize)) -> bool {
        self.points.windows(2).any(|w| w[0] == from && w[1] == to)
    }

    /// Rows from the top; `●` marks path vertices and `─ │ ╱` its steps.
    pub fn ascii(&self) -> String {
        let mut out = String::new();
        for j in (0..=self.height).rev() {
            if j < self.height {
                let mut row: Vec<char> = vec![' '; 4 * self.width + 1];
                for i in 0..=self.width {
                    if self.has_step((i, j), (i, j + 1)) {
                        row[4 * i] = '│';
                    }
                    if i < self.width && self.has_step((i, j), (i + 1, j + 1)) {
                        row[4 * i + 2] = '╱';
                    }
                }
                out.push_str(row.iter().collect::<String>().trim_end());
                out.push('\n');
            }
            let mut row = String::new();
            for i in 0..=self.width {
                row.push(if self.points.contains(&(i, j)) {
                    '●'
                } else {
                    '·'
                });
                if i < self.width {
                    row.push_str(if self.has_step((i, j), (i + 1, j)) {
                        "───"
                    } else {
                        "   "
                    });
                }
            }
            out.push_str(row.trim_end());
            out.push('\n');
        }
        out
    }

    /// A fixed unit grid with the path as a polyline.
    pub fn svg(&self) -> String {
        const UNIT: usize = 40;
        const MARGIN: usize = 20;
        let (w, h) = (
            2 * MARGIN + UNIT * self.width,
            2 * MARGIN + UNIT * self.height,
        );
        let x = |i: usize| MARGIN + UNIT * i;
        let y = |j: usize| MARGIN + UNIT * (self.height - j);
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        )
        .unwrap();
        writeln!(out, r##"<g stroke="#cccccc" stroke-width="1">"##).unwrap();
        for i in 0..=self.width {
            writeln!(
                out,
                r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#,
                x(i),
                y(self.height),
                y(0)
            )
            .unwrap();
        }
        for j in 0..=self.height {
            writeln!(
                out,
                r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#,
                y(j),
                x(0),
                x(self.width)
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|&(i, j)| format!("{},{}", x(i), y(j)))
            .collect();
        writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#000000" stroke-width="3"/>"##,
            pts.join(" ")
        )
        .unwrap();
        for &(i, j) in &self.points {
            writeln!(
                out,
                r##"<circle cx="{}" cy="{}" r="4" fill="#000000"/>"##,
                x(i),
                y(j)
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

/// A product cell by index or by label, e.g. `([0 1 1],[0 0 1])`.
/// Spaces around the label's separators are ignored.
pub fn find_cell(p: &Product, id: &str) -> Option<CellId> {
    if let Ok(c) = id.trim().parse::<usize>() {
        return (c < p.sset.len()).then_some(c);
    }
    let squash = |s: &str| -> String {
        let mut out = String::new();
        for part in s.split_whitespace() {
            if !out.is_empty()
                && !out.ends_with(['(', '[', ','])
                && !part.starts_with([')', ']', ','])
            {
                out.push(' ');
            }
            out.push_str(part);
        }
        out.replace(", ", ",").replace(" ,", ",")
    };
    let want = squash(id);
    (0..p.sset.len()).find(|&c| squash(p.sset.label(c)) == want)
}
