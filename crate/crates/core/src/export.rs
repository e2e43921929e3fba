//! Graph-description export of a prediction overlaid on the newly
//! appearing test-period links.
//!
//! Encoding: predicted edges are solid with width proportional to their
//! aggregated weight; new-but-missed edges are dashed with a nominal 0.2
//! width (and 0.2 is added to every other width so the thinnest edges
//! stay visible). Edges that really appear in the test period are
//! colored on a red-to-blue ramp by their test-set weight — bluer means
//! heavier — while false positives are grey. Nodes are filled with one
//! color per faculty.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::predict::Prediction;
use crate::scalar::Real;
use crate::school::{SchoolEdgeSet, SchoolPair, SchoolWeights};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExportFormat {
    Dot,
    GraphMl,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(ExportFormat::Dot),
            "graphml" => Ok(ExportFormat::GraphMl),
            other => Err(format!("unknown format {other:?}; expected dot or graphml")),
        }
    }
}

const RAMP_RED: (f64, f64, f64) = (178.0, 24.0, 43.0);
const RAMP_BLUE: (f64, f64, f64) = (33.0, 102.0, 172.0);
const GREY: &str = "#999999";

/// Fixed qualitative palette for faculties, cycled when exhausted.
const FACULTY_PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

fn ramp(t: f64) -> String {
    let channel = |a: f64, b: f64| ((a + t * (b - a)).round() as u8) as u32;
    format!(
        "#{:02x}{:02x}{:02x}",
        channel(RAMP_RED.0, RAMP_BLUE.0),
        channel(RAMP_RED.1, RAMP_BLUE.1),
        channel(RAMP_RED.2, RAMP_BLUE.2)
    )
}

struct EdgeSpec {
    pair: SchoolPair,
    width: f64,
    color: String,
    dashed: bool,
    status: &'static str,
}

struct NodeSpec {
    school: String,
    faculty: String,
    color: &'static str,
}

fn layout<T: Real>(
    pred: &Prediction<T>,
    new_edges: &SchoolEdgeSet,
    test_weights: &SchoolWeights<T>,
    faculties: &BTreeMap<String, String>,
) -> (Vec<NodeSpec>, Vec<EdgeSpec>) {
    let drawn: BTreeSet<SchoolPair> = pred.edges.iter().chain(new_edges.iter()).cloned().collect();

    // Min-max normalization of test weights over the new edges.
    let new_test_weights: Vec<f64> = new_edges
        .iter()
        .map(|p| test_weights.get(p).to_f64().expect("weight is finite"))
        .collect();
    let (lo, hi) = new_test_weights
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| {
            (lo.min(w), hi.max(w))
        });
    let normalize = move |w: f64| if hi > lo { (w - lo) / (hi - lo) } else { 1.0 };

    let pred_weight: BTreeMap<&SchoolPair, f64> = pred
        .weights
        .iter()
        .map(|(p, w)| (p, w.to_f64().expect("weight is finite")))
        .collect();

    let edges = drawn
        .iter()
        .map(|pair| {
            let predicted = pred.edges.contains(pair);
            let new = new_edges.contains(pair);
            let (width, dashed) = if predicted {
                (pred_weight[pair] + 0.2, false)
            } else {
                (0.2, true)
            };
            let (color, status) = if new {
                let t = normalize(test_weights.get(pair).to_f64().expect("weight is finite"));
                (ramp(t), if predicted { "predicted-correct" } else { "missed" })
            } else {
                (GREY.to_string(), "false-positive")
            };
            EdgeSpec {
                pair: pair.clone(),
                width,
                color,
                dashed,
                status,
            }
        })
        .collect();

    let schools: BTreeSet<String> = drawn
        .iter()
        .flat_map(|p| [p.first().clone(), p.second().clone()])
        .collect();
    let mut palette_of: BTreeMap<&str, &'static str> = BTreeMap::new();
    let mut distinct: Vec<&str> = schools
        .iter()
        .filter_map(|s| faculties.get(s).map(String::as_str))
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    for (i, f) in distinct.into_iter().enumerate() {
        palette_of.insert(f, FACULTY_PALETTE[i % FACULTY_PALETTE.len()]);
    }
    let nodes = schools
        .into_iter()
        .map(|school| {
            let faculty = faculties.get(&school).cloned().unwrap_or_default();
            let color = palette_of
                .get(faculty.as_str())
                .copied()
                .unwrap_or(*FACULTY_PALETTE.last().expect("palette nonempty"));
            NodeSpec {
                school,
                faculty,
                color,
            }
        })
        .collect();
    (nodes, edges)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Writes the prediction-versus-new-edges overlay in the chosen format.
pub fn export_graph<T: Real>(
    mut out: impl Write,
    pred: &Prediction<T>,
    new_edges: &SchoolEdgeSet,
    test_weights: &SchoolWeights<T>,
    faculties: &BTreeMap<String, String>,
    format: ExportFormat,
) -> std::io::Result<()> {
    let (nodes, edges) = layout(pred, new_edges, test_weights, faculties);
    match format {
        ExportFormat::Dot => {
            writeln!(out, "graph prediction {{")?;
            writeln!(out, "  node [shape=circle style=filled];")?;
            for node in &nodes {
                writeln!(
                    out,
                    "  \"{}\" [fillcolor=\"{}\" faculty=\"{}\"];",
                    node.school, node.color, node.faculty
                )?;
            }
            for edge in &edges {
                writeln!(
                    out,
                    "  \"{}\" -- \"{}\" [style={} penwidth={:.3} color=\"{}\" status=\"{}\"];",
                    edge.pair.first(),
                    edge.pair.second(),
                    if edge.dashed { "dashed" } else { "solid" },
                    edge.width,
                    edge.color,
                    edge.status,
                )?;
            }
            writeln!(out, "}}")?;
        }
        ExportFormat::GraphMl => {
            writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
            writeln!(
                out,
                r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#
            )?;
            writeln!(
                out,
                r#"  <key id="faculty" for="node" attr.name="faculty" attr.type="string"/>"#
            )?;
            writeln!(
                out,
                r#"  <key id="color" for="node" attr.name="color" attr.type="string"/>"#
            )?;
            writeln!(
                out,
                r#"  <key id="width" for="edge" attr.name="width" attr.type="double"/>"#
            )?;
            writeln!(
                out,
                r#"  <key id="ecolor" for="edge" attr.name="color" attr.type="string"/>"#
            )?;
            writeln!(
                out,
                r#"  <key id="style" for="edge" attr.name="style" attr.type="string"/>"#
            )?;
            writeln!(
                out,
                r#"  <key id="status" for="edge" attr.name="status" attr.type="string"/>"#
            )?;
            writeln!(out, r#"  <graph id="prediction" edgedefault="undirected">"#)?;
            for node in &nodes {
                writeln!(
                    out,
                    r#"    <node id="{}"><data key="faculty">{}</data><data key="color">{}</data></node>"#,
                    xml_escape(&node.school),
                    xml_escape(&node.faculty),
                    node.color
                )?;
            }
            for edge in &edges {
                writeln!(
                    out,
                    r#"    <edge source="{}" target="{}"><data key="width">{:.3}</data><data key="ecolor">{}</data><data key="style">{}</data><data key="status">{}</data></edge>"#,
                    xml_escape(edge.pair.first()),
                    xml_escape(edge.pair.second()),
                    edge.width,
                    edge.color,
                    if edge.dashed { "dashed" } else { "solid" },
                    edge.status,
                )?;
            }
            writeln!(out, "  </graph>")?;
            writeln!(out, "</graphml>")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::Pair;
    use crate::predict::{predict_percentile, Prediction};

    fn pair(a: &str, b: &str) -> SchoolPair {
        Pair::new(a.to_string(), b.to_string())
    }

    fn faculties(entries: &[(&str, &str)]) -> BTreeMap<String, String> {
        entries
            .iter()
            .map(|(s, f)| (s.to_string(), f.to_string()))
            .collect()
    }

    fn one_edge_prediction(a: &str, b: &str, w: f64) -> Prediction<f64> {
        let mut weights = SchoolWeights::new();
        weights.add(pair(a, b), w);
        predict_percentile(&weights, &SchoolEdgeSet::new(), 1.0)
    }

    #[test]
    fn correct_edge_is_solid_and_blue() {
        let pred = one_edge_prediction("GEOG", "MATH", 1.5);
        let new: SchoolEdgeSet = [pair("GEOG", "MATH")].into_iter().collect();
        let mut test_weights = SchoolWeights::new();
        test_weights.add(pair("GEOG", "MATH"), 2.0);
        let mut buf = Vec::new();
        export_graph(
            &mut buf,
            &pred,
            &new,
            &test_weights,
            &faculties(&[("GEOG", "FSCI"), ("MATH", "FSCI")]),
            ExportFormat::Dot,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("style=solid"));
        assert!(text.contains("penwidth=1.700")); // 1.5 + 0.2
        assert!(text.contains("#2166ac")); // single new edge sits at ramp max
        assert!(text.contains("status=\"predicted-correct\""));
    }

    #[test]
    fn false_positive_is_grey_and_missed_is_dashed() {
        let pred = one_edge_prediction("CHEM", "PHYS", 0.8);
        let new: SchoolEdgeSet = [pair("GELY", "MATH")].into_iter().collect();
        let test_weights = SchoolWeights::new();
        let mut buf = Vec::new();
        export_graph(
            &mut buf,
            &pred,
            &new,
            &test_weights,
            &faculties(&[("CHEM", "FSCI"), ("PHYS", "FSCI"), ("GELY", "FSCI"), ("MATH", "FSCI")]),
            ExportFormat::Dot,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("#999999"));
        assert!(text.contains("status=\"false-positive\""));
        assert!(text.contains("style=dashed penwidth=0.200"));
        assert!(text.contains("status=\"missed\""));
    }

    #[test]
    fn export_is_deterministic_and_counts_match() {
        let pred = one_edge_prediction("BIOC", "SSCM", 0.4);
        let new: SchoolEdgeSet = [pair("BIOC", "SSCM"), pair("BIOC", "PSYC")]
            .into_iter()
            .collect();
        let mut test_weights = SchoolWeights::new();
        test_weights.add(pair("BIOC", "SSCM"), 1.0);
        test_weights.add(pair("BIOC", "PSYC"), 0.5);
        let fac = faculties(&[("BIOC", "FMVS"), ("SSCM", "FMDY"), ("PSYC", "FSCI")]);
        let render = |format| {
            let mut buf = Vec::new();
            export_graph(&mut buf, &pred, &new, &test_weights, &fac, format).unwrap();
            String::from_utf8(buf).unwrap()
        };
        assert_eq!(render(ExportFormat::Dot), render(ExportFormat::Dot));
        let dot = render(ExportFormat::Dot);
        assert_eq!(dot.matches(" -- ").count(), 2);
        assert_eq!(dot.matches("fillcolor").count(), 3);
        let graphml = render(ExportFormat::GraphMl);
        assert_eq!(graphml.matches("<edge ").count(), 2);
        assert_eq!(graphml.matches("<node ").count(), 3);
    }
}
