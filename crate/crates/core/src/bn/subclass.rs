use std::fmt;

use super::model::Pbn;

/// Parameter-occurrence profile of a pBN.
///
/// `cpts_per_parameter[i]` and `rows_per_parameter[i]` count the CPTs and
/// CPT rows mentioning parameter `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubclassTag {
    pub parameter_count: usize,
    pub parametric_cpts: usize,
    pub cpts_per_parameter: Vec<usize>,
    pub rows_per_parameter: Vec<usize>,
}

impl SubclassTag {
    pub fn max_cpts_per_parameter(&self) -> usize {
        self.cpts_per_parameter.iter().copied().max().unwrap_or(0)
    }

    pub fn max_rows_per_parameter(&self) -> usize {
        self.rows_per_parameter.iter().copied().max().unwrap_or(0)
    }

    /// `p{parameters}c{CPTs with parameters}r{max rows per parameter}`.
    pub fn tag(&self) -> String {
        format!(
            "p{}c{}r{}",
            self.parameter_count,
            self.parametric_cpts,
            self.max_rows_per_parameter()
        )
    }

    fn single_rows(&self) -> bool {
        self.rows_per_parameter.iter().all(|&r| r == 1)
    }

    pub fn is_p1c1r1(&self) -> bool {
        self.parameter_count == 1 && self.cpts_per_parameter == [1] && self.single_rows()
    }

    pub fn is_p2c2r1(&self) -> bool {
        self.parameter_count == 2
            && self.cpts_per_parameter.iter().all(|&c| c == 1 || c == 2)
            && self.single_rows()
    }

    pub fn is_pstar_c1r1(&self) -> bool {
        self.parameter_count >= 1
            && self.parametric_cpts == 1
            && self.cpts_per_parameter.iter().all(|&c| c == 1)
            && self.single_rows()
    }
}

impl fmt::Display for SubclassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl Pbn {
    pub fn classify(&self) -> SubclassTag {
        let n = self.nparams();
        let mut cpts = vec![0; n];
        let mut rows = vec![0; n];
        let mut parametric = 0;
        for cpt in self.cpts() {
            let mut in_cpt = vec![false; n];
            for row in &cpt.rows {
                let mut in_row = vec![false; n];
                for e in row {
                    for x in e.variables() {
                        in_row[x.0] = true;
                    }
                }
                for (i, &hit) in in_row.iter().enumerate() {
                    if hit {
                        rows[i] += 1;
                        in_cpt[i] = true;
                    }
                }
            }
            for (i, &hit) in in_cpt.iter().enumerate() {
                if hit {
                    cpts[i] += 1;
                }
            }
            if in_cpt.iter().any(|&h| h) {
                parametric += 1;
            }
        }
        SubclassTag {
            parameter_count: n,
            parametric_cpts: parametric,
            cpts_per_parameter: cpts,
            rows_per_parameter: rows,
        }
    }
}
