//! Minimal SVG rendering of a leveled embedding: levels as horizontal
//! rows, vertices spread by rank, edges as straight segments.

use squareprod::LeveledEmbedding;

const CELL: f64 = 60.0;
const MARGIN: f64 = 40.0;
const RADIUS: f64 = 12.0;

pub fn leveled_to_svg(e: &LeveledEmbedding) -> String {
    let levels = e.level_count();
    let widest = (0..levels)
        .map(|i| e.level_vertices(i).len())
        .max()
        .unwrap_or(1);
    let width = 2.0 * MARGIN + (widest.max(1) - 1) as f64 * CELL;
    let height = 2.0 * MARGIN + (levels.max(1) - 1) as f64 * CELL;

    let pos = |v: usize| -> (f64, f64) {
        let level = e.level_of(v).unwrap();
        let rank = e.rank_of(v).unwrap();
        let count = e.level_vertices(level).len();
        let row_width = (count - 1) as f64 * CELL;
        let x = MARGIN + (width - 2.0 * MARGIN - row_width) / 2.0 + rank as f64 * CELL;
        let y = MARGIN + level as f64 * CELL;
        (x, y)
    };

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    );
    for (u, v) in e.base().underlying().edges() {
        let (x1, y1) = pos(u);
        let (x2, y2) = pos(v);
        out.push_str(&format!(
            "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" \
             stroke=\"#444\" stroke-width=\"1.5\"/>\n"
        ));
    }
    for v in e.base().vertices() {
        let (x, y) = pos(v);
        out.push_str(&format!(
            "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{RADIUS}\" fill=\"#fff\" stroke=\"#000\"/>\n"
        ));
        out.push_str(&format!(
            "  <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"11\" \
             font-family=\"sans-serif\">{v}</text>\n",
            y + 4.0
        ));
    }
    out.push_str("</svg>\n");
    out
}
