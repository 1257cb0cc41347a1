//! External volume tables (CSV in) and figure data (TSV out).

use std::io::{Read, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use super::{fmt_float, FigureRow};
use crate::error::{Error, Result};
use crate::strata::{ExactReal, Stratum};

/// One exact volume `num/den * pi^pi_exp` from an external table.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeEntry {
    pub stratum: Stratum,
    pub value: ExactReal,
    pub source: String,
}

#[derive(Deserialize)]
struct Row {
    stratum: String,
    pi_exp: i32,
    num: String,
    den: String,
    source: String,
}

/// Reads `stratum,pi_exp,num,den,source` (header required). Strata with
/// several zeros are quoted, e.g. `"2,1,1"`.
pub fn read_volume_table<R: Read>(reader: R) -> Result<Vec<VolumeEntry>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Invalid(format!("volume table: {e}")))?
        .clone();
    let want = ["stratum", "pi_exp", "num", "den", "source"];
    if headers.iter().collect::<Vec<_>>() != want {
        return Err(Error::Invalid(format!(
            "volume table header must be {}, got {}",
            want.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::Invalid(format!("volume table line {line}: {e}")))?;
        let stratum: Stratum = row.stratum.parse().map_err(|e| {
            Error::Invalid(format!(
                "volume table line {line}: stratum {:?}: {e}",
                row.stratum
            ))
        })?;
        let int = |s: &str| -> Result<BigInt> {
            s.parse()
                .map_err(|_| Error::Invalid(format!("volume table line {line}: bad integer {s:?}")))
        };
        let (num, den) = (int(&row.num)?, int(&row.den)?);
        if den <= BigInt::from(0) || num <= BigInt::from(0) {
            return Err(Error::Invalid(format!(
                "volume table line {line}: volume must be positive"
            )));
        }
        out.push(VolumeEntry {
            stratum,
            value: ExactReal::new(BigRational::new(num, den), row.pi_exp),
            source: row.source,
        });
    }
    Ok(out)
}

/// `genus<TAB>min<TAB>max<TAB>argmin<TAB>argmax`, one row per genus.
pub fn write_figure_tsv<W: Write>(mut w: W, rows: &[FigureRow], digits: usize) -> Result<()> {
    writeln!(w, "genus\tmin\tmax\targmin\targmax")?;
    for r in rows {
        writeln!(
            w,
            "{}\t{}\t{}\tH({})\tH({})",
            r.genus,
            fmt_float(r.min, digits),
            fmt_float(r.max, digits),
            r.argmin,
            r.argmax
        )?;
    }
    Ok(())
}
