//! One-line classifier files.
//!
//! ```text
//! linear-sigmoid <d> <threshold> <bias> <w_1> ... <w_d>
//! homogeneous-halfspace <d> <r_1> ... <r_d>
//! affine-halfspace <d> <offset> <r_1> ... <r_d>
//! explicit-labeling <n> <bits>
//! ```

use llp_core::{Classifier, ClassifierKind, Labeling};

use crate::error::{LabError, Result};

fn floats(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ")
}

pub fn classifier_to_line(h: &Classifier) -> String {
    let kind = h.kind().name();
    match h {
        Classifier::LinearSigmoid {
            weights,
            bias,
            threshold,
        } => format!("{kind} {} {threshold:e} {bias:e} {}", weights.len(), floats(weights)),
        Classifier::HomogeneousHalfspace { normal } => format!("{kind} {} {}", normal.len(), floats(normal)),
        Classifier::AffineHalfspace { normal, offset } => {
            format!("{kind} {} {offset:e} {}", normal.len(), floats(normal))
        }
        Classifier::Explicit(l) => {
            let bits: String = l.as_slice().iter().map(|&b| if b { '1' } else { '0' }).collect();
            format!("{kind} {} {bits}", l.len())
        }
    }
}

pub fn classifier_from_line(line: &str) -> Result<Classifier> {
    let bad = |msg: String| LabError::Data(format!("classifier: {msg}"));
    let mut tok = line.split_whitespace();
    let name = tok.next().ok_or_else(|| bad("empty line".into()))?;
    let kind = ClassifierKind::from_name(name).ok_or_else(|| bad(format!("unknown kind {name:?}")))?;
    let size: usize = tok
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad("missing size".into()))?;
    let rest: Vec<&str> = tok.collect();
    if kind == ClassifierKind::ExplicitLabeling {
        let bits = match rest.as_slice() {
            [bits] if bits.len() == size => bits,
            [] if size == 0 => "",
            _ => return Err(bad(format!("expected {size} label bits"))),
        };
        let labels = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(bad(format!("bad label bit {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Classifier::Explicit(Labeling::new(labels)));
    }
    let nums = rest
        .iter()
        .map(|t| t.parse::<f64>().map_err(|_| bad(format!("bad number {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let extra = match kind {
        ClassifierKind::LinearSigmoid => 2,
        ClassifierKind::AffineHalfspace => 1,
        _ => 0,
    };
    if nums.len() != size + extra {
        return Err(bad(format!("expected {} numbers, got {}", size + extra, nums.len())));
    }
    let (head, v) = nums.split_at(extra);
    let v = v.to_vec();
    Ok(match kind {
        ClassifierKind::LinearSigmoid => Classifier::LinearSigmoid {
            threshold: head[0],
            bias: head[1],
            weights: v,
        },
        ClassifierKind::AffineHalfspace => Classifier::AffineHalfspace {
            offset: head[0],
            normal: v,
        },
        _ => Classifier::HomogeneousHalfspace { normal: v },
    })
}

pub fn save_classifier(h: &Classifier, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, classifier_to_line(h) + "\n").map_err(|e| LabError::io(path, e))
}

pub fn load_classifier(path: &std::path::Path) -> Result<Classifier> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .ok_or_else(|| LabError::Data(format!("{}: no classifier line", path.display())))?;
    classifier_from_line(line)
}
