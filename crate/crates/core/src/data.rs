//! Dataset container, standardization and CSV ingestion.

use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::config::Task;
use crate::error::{Error, Result};

/// Standardized design matrix and response.
///
/// Feature columns have mean 0 and unit standard deviation (divisor `n`).
/// Columns that are constant in the raw data are left at zero and flagged in
/// [`Dataset::constant_columns`]. Regression responses are centered;
/// classification responses are kept as 0/1 labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    x: Array2<f64>,
    y: Array1<f64>,
    task: Task,
    feature_names: Vec<String>,
    column_means: Vec<f64>,
    column_sds: Vec<f64>,
    constant: Vec<bool>,
    response_mean: f64,
}

/// Standardize raw features and response.
pub fn standardize(x_raw: ArrayView2<f64>, y_raw: ArrayView1<f64>, task: Task) -> Result<Dataset> {
    let (n, p) = x_raw.dim();
    if y_raw.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "response has {} entries but the feature matrix has {n} rows",
            y_raw.len()
        )));
    }
    if p == 0 {
        return Err(Error::InvalidData("feature matrix has no columns".into()));
    }
    if let Some(((i, j), v)) = x_raw.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidData(format!(
            "non-finite feature value {v} at row {i}, column {j}"
        )));
    }
    if let Some((i, v)) = y_raw.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidData(format!(
            "non-finite response value {v} at row {i}"
        )));
    }
    if n < 4 {
        return Err(Error::TooFewSamples(n));
    }
    if task == Task::Classification {
        if let Some((row, &value)) = y_raw
            .iter()
            .enumerate()
            .find(|(_, &v)| v != 0.0 && v != 1.0)
        {
            return Err(Error::InvalidLabels { row, value });
        }
    }

    let nf = n as f64;
    let mut x = x_raw.to_owned();
    let mut column_means = Vec::with_capacity(p);
    let mut column_sds = Vec::with_capacity(p);
    let mut constant = Vec::with_capacity(p);
    for mut col in x.axis_iter_mut(Axis(1)) {
        let mean = col.sum() / nf;
        col.mapv_inplace(|v| v - mean);
        let sd = (col.iter().map(|v| v * v).sum::<f64>() / nf).sqrt();
        let is_constant = sd <= 1e-12 * mean.abs().max(1.0);
        if is_constant {
            col.fill(0.0);
        } else {
            col.mapv_inplace(|v| v / sd);
        }
        column_means.push(mean);
        column_sds.push(sd);
        constant.push(is_constant);
    }

    let mut y = y_raw.to_owned();
    let response_mean = y.sum() / nf;
    if task == Task::Regression {
        y.mapv_inplace(|v| v - response_mean);
    }

    Ok(Dataset {
        x,
        y,
        task,
        feature_names: (0..p).map(|j| format!("x{}", j + 1)).collect(),
        column_means,
        column_sds,
        constant,
        response_mean,
    })
}

impl Dataset {
    pub fn x(&self) -> ArrayView2<'_, f64> {
        self.x.view()
    }

    pub fn y(&self) -> ArrayView1<'_, f64> {
        self.y.view()
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p() {
            return Err(Error::ShapeMismatch(format!(
                "{} feature names for {} columns",
                names.len(),
                self.p()
            )));
        }
        self.feature_names = names;
        Ok(self)
    }

    /// Raw column means removed during standardization.
    pub fn column_means(&self) -> &[f64] {
        &self.column_means
    }

    /// Raw column standard deviations (divisor `n`).
    pub fn column_sds(&self) -> &[f64] {
        &self.column_sds
    }

    /// Columns that were constant before standardization.
    pub fn constant_columns(&self) -> &[bool] {
        &self.constant
    }

    pub fn response_mean(&self) -> f64 {
        self.response_mean
    }
}

/// Read an `n x p` numeric CSV. A first row containing any non-numeric field
/// is taken as a header of feature names.
pub fn read_features_csv(path: &Path) -> Result<(Array2<f64>, Option<Vec<String>>)> {
    let (rows, header) = read_numeric_rows(path)?;
    if rows.is_empty() {
        return Err(Error::InvalidData(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    let p = rows[0].len();
    if let Some(h) = &header {
        if h.len() != p {
            return Err(Error::ShapeMismatch(format!(
                "{}: header has {} names but rows have {p} fields",
                path.display(),
                h.len()
            )));
        }
    }
    let n = rows.len();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let x = Array2::from_shape_vec((n, p), flat).expect("rows checked to have equal width");
    Ok((x, header))
}

/// Read a single-column CSV (optional header).
pub fn read_response_csv(path: &Path) -> Result<Array1<f64>> {
    let (rows, _) = read_numeric_rows(path)?;
    if let Some(row) = rows.iter().find(|r| r.len() != 1) {
        return Err(Error::ShapeMismatch(format!(
            "{}: response file must have exactly one column, found a row with {}",
            path.display(),
            row.len()
        )));
    }
    Ok(rows.into_iter().map(|r| r[0]).collect())
}

/// Read features and response, check shapes and standardize.
pub fn load_dataset(features: &Path, response: &Path, task: Task) -> Result<Dataset> {
    let (x, names) = read_features_csv(features)?;
    let y = read_response_csv(response)?;
    if y.len() != x.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "{} has {} rows but {} has {}",
            features.display(),
            x.nrows(),
            response.display(),
            y.len()
        )));
    }
    let data = standardize(x.view(), y.view(), task)?;
    match names {
        Some(names) => data.with_feature_names(names),
        None => Ok(data),
    }
}

fn read_numeric_rows(path: &Path) -> Result<(Vec<Vec<f64>>, Option<Vec<String>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    let mut rows = Vec::new();
    let mut header = None;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(values) => rows.push(values),
            Err(_) if i == 0 => header = Some(record.iter().map(str::to_owned).collect()),
            Err(_) => {
                return Err(Error::InvalidData(format!(
                    "{}: non-numeric field on line {}",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok((rows, header))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn column_is_scaled_with_population_variance() {
        let x = array![[1.0], [2.0], [3.0], [2.0]];
        let data = standardize(
            x.view(),
            array![0.0, 1.0, 0.0, 1.0].view(),
            Task::Regression,
        )
        .unwrap();
        let sd = (0.5f64).sqrt();
        let expect = [-1.0 / sd, 0.0, 1.0 / sd, 0.0];
        for (a, b) in data.x().column(0).iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn one_two_three_standardizes_to_known_values() {
        // mean 2, sd sqrt(2/3)
        let x = array![[1.0, 0.0], [2.0, 1.0], [3.0, 5.0], [2.0, 3.0]];
        let y = array![1.0, 2.0, 3.0, 4.0];
        let data = standardize(
            x.slice(ndarray::s![0..3, ..]).to_owned().view(),
            y.slice(ndarray::s![0..3]),
            Task::Regression,
        );
        // three rows is below the minimum sample size
        assert!(matches!(data, Err(Error::TooFewSamples(3))));

        let x = array![[1.0], [2.0], [3.0], [1.0], [2.0], [3.0]];
        let data = standardize(x.view(), Array1::zeros(6).view(), Task::Regression).unwrap();
        let col = data.x().column(0).to_vec();
        assert!((col[0] + 1.224744871391589).abs() < 1e-12);
        assert!(col[1].abs() < 1e-15);
        assert!((col[2] - 1.224744871391589).abs() < 1e-12);
    }

    #[test]
    fn standardized_columns_have_zero_mean_unit_sd() {
        let x = Array2::from_shape_fn((37, 5), |(i, j)| {
            ((i * 7 + j * 13) % 11) as f64 * (j as f64 + 0.5) + j as f64
        });
        let y = Array1::from_shape_fn(37, |i| i as f64 * 0.3);
        let data = standardize(x.view(), y.view(), Task::Regression).unwrap();
        for col in data.x().axis_iter(Axis(1)) {
            let mean = col.sum() / 37.0;
            let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 37.0).sqrt();
            assert!(mean.abs() < 1e-10);
            assert!((sd - 1.0).abs() < 1e-8);
        }
        assert!(data.y().sum().abs() < 1e-10);
    }

    #[test]
    fn standardize_is_idempotent() {
        let x = Array2::from_shape_fn((20, 3), |(i, j)| ((i * 5 + j) as f64).sin() * 3.0 + 1.0);
        let y = Array1::from_shape_fn(20, |i| i as f64);
        let once = standardize(x.view(), y.view(), Task::Regression).unwrap();
        let twice = standardize(once.x(), once.y(), Task::Regression).unwrap();
        for (a, b) in once.x().iter().zip(twice.x().iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in once.y().iter().zip(twice.y().iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_response_centers_to_zero() {
        let x = array![[1.0], [2.0], [3.0], [4.0]];
        let data = standardize(
            x.view(),
            array![5.0, 5.0, 5.0, 5.0].view(),
            Task::Regression,
        )
        .unwrap();
        assert!(data.y().iter().all(|&v| v == 0.0));
        assert_eq!(data.response_mean(), 5.0);
    }

    #[test]
    fn constant_columns_are_zeroed_and_flagged() {
        let x = array![[1.0, 7.0], [2.0, 7.0], [3.0, 7.0], [4.0, 7.0]];
        let data = standardize(
            x.view(),
            array![1.0, 0.0, 1.0, 0.0].view(),
            Task::Classification,
        )
        .unwrap();
        assert_eq!(data.constant_columns(), &[false, true]);
        assert!(data.x().column(1).iter().all(|&v| v == 0.0));
        // labels are not centered
        assert_eq!(data.y().to_vec(), vec![1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = array![[1.0], [f64::NAN], [3.0], [4.0]];
        let y = array![0.0, 1.0, 0.0, 1.0];
        assert!(matches!(
            standardize(x.view(), y.view(), Task::Regression),
            Err(Error::InvalidData(_))
        ));
        let x = array![[1.0], [2.0], [3.0], [4.0]];
        assert!(matches!(
            standardize(
                x.view(),
                array![0.0, 2.0, 0.0, 1.0].view(),
                Task::Classification
            ),
            Err(Error::InvalidLabels { row: 1, .. })
        ));
        assert!(matches!(
            standardize(x.view(), array![0.0, 1.0].view(), Task::Regression),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn csv_header_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let xp = dir.path().join("x.csv");
        let yp = dir.path().join("y.csv");
        std::fs::write(&xp, "a,b\n1,2\n2,1\n3,5\n4,0\n").unwrap();
        std::fs::write(&yp, "1\n2\n3\n4\n").unwrap();
        let data = load_dataset(&xp, &yp, Task::Regression).unwrap();
        assert_eq!(data.feature_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(data.n(), 4);

        std::fs::write(&yp, "1\n2\n3\n").unwrap();
        assert!(matches!(
            load_dataset(&xp, &yp, Task::Regression),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
