use crate::geometry::Vec2;
use std::fmt::Write;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

/// Stroke colours for successive bodies.
pub const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

enum Layer {
    Outline { pts: Vec<Vec2>, color: String, fill: bool },
    Dots { pts: Vec<Vec2>, color: String, r: f64 },
}

/// An 800x800 plot of polygons and point clouds with a legend.
#[derive(Default)]
pub struct Figure {
    layers: Vec<Layer>,
    legend: Vec<(String, String)>,
}

impl Figure {
    pub fn new() -> Self {
        Self::default()
    }

    /// Source outline, drawn in gray.
    pub fn source_outline(&mut self, pts: &[Vec2], label: &str) {
        self.layers.push(Layer::Outline { pts: pts.to_vec(), color: "#999999".into(), fill: true });
        self.legend.push((label.into(), "#999999".into()));
    }

    /// Source atoms, drawn in gray.
    pub fn source_points(&mut self, pts: &[Vec2], label: &str) {
        let r = if pts.len() > 2000 { 0.8 } else { 2.5 };
        self.layers.push(Layer::Dots { pts: pts.to_vec(), color: "#999999".into(), r });
        self.legend.push((label.into(), "#999999".into()));
    }

    /// A body outline in the next palette colour; single points become dots.
    pub fn body(&mut self, pts: &[Vec2], label: &str) {
        let color = PALETTE[self.legend.iter().filter(|l| l.1 != "#999999").count() % PALETTE.len()].to_string();
        if pts.len() == 1 {
            self.layers.push(Layer::Dots { pts: pts.to_vec(), color: color.clone(), r: 4.0 });
        } else {
            self.layers.push(Layer::Outline { pts: pts.to_vec(), color: color.clone(), fill: false });
        }
        self.legend.push((label.into(), color));
    }

    pub fn render(&self) -> String {
        let all = self.layers.iter().flat_map(|l| match l {
            Layer::Outline { pts, .. } | Layer::Dots { pts, .. } => pts.iter(),
        });
        let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in all {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.x.is_finite() {
            lo = Vec2::new(-1.0, -1.0);
            hi = Vec2::new(1.0, 1.0);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let k = (SIZE - 2.0 * MARGIN) / span;
        let cx = 0.5 * (lo.x + hi.x);
        let cy = 0.5 * (lo.y + hi.y);
        let map = |p: &Vec2| (SIZE / 2.0 + (p.x - cx) * k, SIZE / 2.0 - (p.y - cy) * k);

        let mut s = String::new();
        writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#).unwrap();
        writeln!(s, r#"<rect width="800" height="800" fill="white"/>"#).unwrap();
        for layer in &self.layers {
            match layer {
                Layer::Outline { pts, color, fill } => {
                    let path: Vec<String> =
                        pts.iter().map(&map).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
                    let fill = if *fill { format!(r#"fill="{color}" fill-opacity="0.25""#) } else { r#"fill="none""#.into() };
                    let tag = if pts.len() == 2 { "polyline" } else { "polygon" };
                    writeln!(s, r#"<{tag} points="{}" stroke="{color}" stroke-width="1.5" {fill}/>"#, path.join(" ")).unwrap();
                }
                Layer::Dots { pts, color, r } => {
                    for p in pts {
                        let (x, y) = map(p);
                        writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{color}"/>"#).unwrap();
                    }
                }
            }
        }
        for (i, (label, color)) in self.legend.iter().enumerate() {
            let y = 20.0 + 18.0 * i as f64;
            writeln!(s, r#"<rect x="12" y="{:.1}" width="12" height="12" fill="{color}"/>"#, y - 10.0).unwrap();
            writeln!(s, r#"<text x="30" y="{y:.1}" font-family="monospace" font-size="13">{}</text>"#, escape(label)).unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
