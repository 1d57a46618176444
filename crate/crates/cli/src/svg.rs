//! Minimal static SVG line charts, enough for benchmark curves and training
//! trajectories. No dependency, no interactivity; one polyline per series
//! with a small legend.

pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Use log10 scales on both axes (points must be positive).
    pub log_log: bool,
    pub series: Vec<Series>,
}

pub const PALETTE: [&str; 4] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"];

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

fn nice_ticks(min: f64, max: f64, count: usize) -> Vec<f64> {
    if max <= min || max.is_nan() || min.is_nan() {
        return vec![min];
    }
    let step = (max - min) / count as f64;
    (0..=count).map(|i| min + step * i as f64).collect()
}

/// Compact tick label: plain decimal in a middle range, scientific outside.
fn fmt_tick(value: f64) -> String {
    let magnitude = value.abs();
    if magnitude == 0.0 {
        "0".into()
    } else if (0.001..10_000.0).contains(&magnitude) {
        let text = format!("{value:.3}");
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{value:.1e}")
    }
}

impl Chart {
    pub fn render(&self) -> String {
        let map = |v: f64| if self.log_log { v.log10() } else { v };
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for series in &self.series {
            for &(x, y) in &series.points {
                let (x, y) = (map(x), map(y));
                if x.is_finite() && y.is_finite() {
                    x_min = x_min.min(x);
                    x_max = x_max.max(x);
                    y_min = y_min.min(y);
                    y_max = y_max.max(y);
                }
            }
        }
        if !x_min.is_finite() {
            x_min = 0.0;
            x_max = 1.0;
            y_min = 0.0;
            y_max = 1.0;
        }
        if x_max == x_min {
            x_max = x_min + 1.0;
        }
        if y_max == y_min {
            y_max = y_min + 1.0;
        }
        let pad = 0.04 * (y_max - y_min);
        y_min -= pad;
        y_max += pad;

        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
        let sy = |y: f64| MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        ));
        svg.push_str(&format!(
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
            WIDTH / 2.0,
            escape(&self.title)
        ));

        // Axes.
        svg.push_str(&format!(
            "<line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
             <line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\" stroke=\"black\"/>\n",
            l = MARGIN_LEFT,
            r = WIDTH - MARGIN_RIGHT,
            t = MARGIN_TOP,
            b = HEIGHT - MARGIN_BOTTOM
        ));

        for tick in nice_ticks(x_min, x_max, 6) {
            let x = sx(tick);
            let label = if self.log_log {
                fmt_tick(10f64.powf(tick))
            } else {
                fmt_tick(tick)
            };
            svg.push_str(&format!(
                "<line x1=\"{x}\" y1=\"{b}\" x2=\"{x}\" y2=\"{b2}\" stroke=\"black\"/>\n\
                 <text x=\"{x}\" y=\"{ty}\" text-anchor=\"middle\">{label}</text>\n",
                b = HEIGHT - MARGIN_BOTTOM,
                b2 = HEIGHT - MARGIN_BOTTOM + 5.0,
                ty = HEIGHT - MARGIN_BOTTOM + 18.0,
            ));
        }
        for tick in nice_ticks(y_min, y_max, 6) {
            let y = sy(tick);
            let label = if self.log_log {
                format!("{:.2e}", 10f64.powf(tick))
            } else {
                fmt_tick(tick)
            };
            svg.push_str(&format!(
                "<line x1=\"{l2}\" y1=\"{y}\" x2=\"{l}\" y2=\"{y}\" stroke=\"black\"/>\n\
                 <text x=\"{tx}\" y=\"{ty}\" text-anchor=\"end\">{label}</text>\n",
                l = MARGIN_LEFT,
                l2 = MARGIN_LEFT - 5.0,
                tx = MARGIN_LEFT - 8.0,
                ty = y + 4.0,
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 10.0,
            escape(&self.x_label)
        ));
        svg.push_str(&format!(
            "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        ));

        // Series and legend.
        for (i, series) in self.series.iter().enumerate() {
            let path: Vec<String> = series
                .points
                .iter()
                .filter(|(x, y)| map(*x).is_finite() && map(*y).is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(map(x)), sy(map(y))))
                .collect();
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
                series.color,
                path.join(" ")
            ));
            let ly = MARGIN_TOP + 14.0 * i as f64 + 8.0;
            svg.push_str(&format!(
                "<line x1=\"{x1}\" y1=\"{ly}\" x2=\"{x2}\" y2=\"{ly}\" stroke=\"{c}\" stroke-width=\"2\"/>\n\
                 <text x=\"{tx}\" y=\"{ty}\">{label}</text>\n",
                x1 = MARGIN_LEFT + 10.0,
                x2 = MARGIN_LEFT + 34.0,
                c = series.color,
                tx = MARGIN_LEFT + 40.0,
                ty = ly + 4.0,
                label = escape(&series.label)
            ));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_well_formed_document() {
        let chart = Chart {
            title: "times".into(),
            x_label: "n".into(),
            y_label: "seconds".into(),
            log_log: true,
            series: vec![Series {
                label: "hungarian".into(),
                color: PALETTE[0],
                points: vec![(8.0, 1e-6), (16.0, 8e-6), (32.0, 6e-5)],
            }],
        };
        let svg = chart.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("hungarian"));
    }

    #[test]
    fn degenerate_ranges_do_not_panic() {
        let chart = Chart {
            title: "flat".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            log_log: false,
            series: vec![Series {
                label: "one".into(),
                color: PALETTE[1],
                points: vec![(1.0, 2.0)],
            }],
        };
        let svg = chart.render();
        assert!(svg.contains("</svg>"));
    }
}
