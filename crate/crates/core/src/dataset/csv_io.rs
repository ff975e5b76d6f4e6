//! One row per sample: 120 comma-separated values, the label (empty when unknown) and a split
//! tag. A header row is written and skipped on load.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::split::{CsiSample, DatasetSplit};
use crate::error::{Error, Result};
use crate::label::ClassLabel;
use crate::models::CSI_WIDTH;

pub const SPLIT_TRAIN: &str = "train";
pub const SPLIT_TRAIN_LABELED: &str = "train-labeled";
pub const SPLIT_TEST: &str = "test";

fn header() -> String {
    let mut h: Vec<String> = (1..=CSI_WIDTH).map(|c| format!("ch{c}")).collect();
    h.push("label".into());
    h.push("split".into());
    h.join(",")
}

fn write_row(out: &mut String, s: &CsiSample, tag: &str) {
    for v in &s.values {
        // Display for f64 is the shortest representation that round-trips.
        write!(out, "{v},").expect("write to String");
    }
    if let Some(l) = s.label {
        write!(out, "{l}").expect("write to String");
    }
    out.push(',');
    out.push_str(tag);
    out.push('\n');
}

pub fn save_csv(split: &DatasetSplit, path: &Path) -> Result<()> {
    let mut out = header();
    out.push('\n');
    let mut labeled = split.labeled_subset.iter().peekable();
    for (i, s) in split.train.iter().enumerate() {
        let tag = if labeled.peek() == Some(&&i) {
            labeled.next();
            SPLIT_TRAIN_LABELED
        } else {
            SPLIT_TRAIN
        };
        write_row(&mut out, s, tag);
    }
    for s in &split.test {
        write_row(&mut out, s, SPLIT_TEST);
    }
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn load_csv(path: &Path) -> Result<DatasetSplit> {
    let text = fs::read_to_string(path)?;
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut labeled_subset = Vec::new();
    let mut classes = 0usize;
    let mut rows = 0usize;

    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || (n == 0 && line.starts_with("ch1,")) {
            continue;
        }
        rows += 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != CSI_WIDTH + 2 {
            return Err(err(
                line_no,
                format!("expected {} fields ({CSI_WIDTH} values, label, split), found {}", CSI_WIDTH + 2, fields.len()),
            ));
        }
        let values = fields[..CSI_WIDTH]
            .iter()
            .enumerate()
            .map(|(c, f)| {
                f.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(line_no, format!("channel {}: not a finite number: {f:?}", c + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        let label_field = fields[CSI_WIDTH].trim();
        let label = if label_field.is_empty() {
            None
        } else {
            let n: u16 = label_field
                .parse()
                .map_err(|_| err(line_no, format!("label is not an integer: {label_field:?}")))?;
            let l = ClassLabel::new(n).ok_or_else(|| err(line_no, "labels start at 1".into()))?;
            classes = classes.max(n as usize);
            Some(l)
        };
        let sample = CsiSample { values, label };
        match fields[CSI_WIDTH + 1].trim() {
            SPLIT_TRAIN => train.push(sample),
            SPLIT_TRAIN_LABELED => {
                if label.is_none() {
                    return Err(err(line_no, "train-labeled row without a label".into()));
                }
                labeled_subset.push(train.len());
                train.push(sample);
            }
            SPLIT_TEST => test.push(sample),
            other => return Err(err(line_no, format!("unknown split tag {other:?}"))),
        }
    }
    if rows == 0 {
        return Err(Error::Dataset(format!("{} contains no samples", path.display())));
    }
    Ok(DatasetSplit {
        classes,
        train,
        test,
        labeled_subset,
        normalization: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{select_labeled_subset, synth_generate, SynthConfig};

    #[test]
    fn round_trip_ten_samples() {
        let ds = synth_generate(&SynthConfig {
            classes: 2,
            train_per_class: 3,
            test_per_class: 2,
            seed: 4,
            noise_sigma: 0.05,
        })
        .unwrap();
        let split = select_labeled_subset(&ds.split, 1, 8).unwrap();
        assert_eq!(split.train.len() + split.test.len(), 10);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        save_csv(&split, &path).unwrap();
        let back = load_csv(&path).unwrap();
        assert_eq!(back.labeled_subset, split.labeled_subset);
        assert_eq!(back.classes, 2);
        for (a, b) in back.train.iter().chain(&back.test).zip(split.train.iter().chain(&split.test)) {
            assert_eq!(a.label, b.label);
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn empty_file_is_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        fs::write(&path, "").unwrap();
        assert!(load_csv(&path).is_err());
    }

    #[test]
    fn short_row_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let good: Vec<String> = (0..120).map(|_| "0.5".to_string()).collect();
        let short: Vec<String> = (0..119).map(|_| "0.5".to_string()).collect();
        let body = format!("{},3,train\n{},3,train\n", good.join(","), short.join(","));
        fs::write(&path, body).unwrap();
        match load_csv(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_value_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let mut vals: Vec<String> = (0..120).map(|_| "0.5".to_string()).collect();
        vals[7] = "abc".into();
        fs::write(&path, format!("{}\n{},1,test\n", header(), vals.join(","))).unwrap();
        match load_csv(&path) {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("channel 8"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
