//! CSV formats. Every value column holds an exact string (integer, `p/q`);
//! the optional `approx` column of a sample file is the only decimal.

use std::fmt::Display;
use std::io::{Read, Write};
use std::str::FromStr;

use anyhow::{anyhow, Context};

use tmpascal_core::verify::ResidualRecord;
use tmpascal_core::{CoefficientRow, Dyadic};

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// Header `k,n,value`.
pub fn write_window<'a, W, T, I>(w: W, cells: I) -> anyhow::Result<()>
where
    W: Write,
    T: Display + 'a,
    I: IntoIterator<Item = (u64, u32, &'a T)>,
{
    let mut out = writer(w);
    out.write_record(["k", "n", "value"])?;
    for (k, n, v) in cells {
        out.write_record([k.to_string(), n.to_string(), v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a file written by [`write_window`].
pub fn read_window<R: Read, T: FromStr>(r: R) -> anyhow::Result<Vec<(u64, u32, T)>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(r);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["k", "n", "value"] {
        return Err(anyhow!("expected header k,n,value, found {:?}", headers));
    }
    let mut cells = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let k = record[0].parse().with_context(|| format!("line {line}: k"))?;
        let n = record[1].parse().with_context(|| format!("line {line}: n"))?;
        let v = record[2].parse().map_err(|_| anyhow!("line {line}: value {:?}", &record[2]))?;
        cells.push((k, n, v));
    }
    Ok(cells)
}

/// Header `n,l,value`, rows in order.
pub fn write_coefficients<W: Write>(w: W, rows: &[CoefficientRow]) -> anyhow::Result<()> {
    let mut out = writer(w);
    out.write_record(["n", "l", "value"])?;
    for row in rows {
        for (l, v) in row.values().iter().enumerate() {
            out.write_record([row.n().to_string(), l.to_string(), v.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Header `x,f`, or `x,f,approx` when `decimals` is given.
pub fn write_samples<W: Write>(w: W, samples: &[(Dyadic, Dyadic)], decimals: Option<usize>) -> anyhow::Result<()> {
    let mut out = writer(w);
    match decimals {
        Some(_) => out.write_record(["x", "f", "approx"])?,
        None => out.write_record(["x", "f"])?,
    }
    for (x, f) in samples {
        let mut record = vec![x.to_string(), f.to_string()];
        if let Some(places) = decimals {
            record.push(f.to_decimal_places(places));
        }
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}

/// Header `n,X,integral,lhs,rhs,residual`.
pub fn write_residuals<W: Write>(w: W, records: &[ResidualRecord]) -> anyhow::Result<()> {
    let mut out = writer(w);
    out.write_record(["n", "X", "integral", "lhs", "rhs", "residual"])?;
    for r in records {
        out.write_record([
            r.n.to_string(),
            r.x.to_string(),
            r.integral.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.residual.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn empty_window_is_header_only() {
        let mut buf = Vec::new();
        write_window::<_, BigInt, _>(&mut buf, std::iter::empty()).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k,n,value\n");
    }

    #[test]
    fn samples_with_approx() {
        let mut buf = Vec::new();
        let s = vec![("1/2".parse().unwrap(), "-1/8".parse().unwrap())];
        write_samples(&mut buf, &s, Some(4)).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,f,approx\n1/2,-1/8,-0.125\n");
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(read_window::<_, BigInt>("a,b,c\n1,2,3\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn rational_window_round_trips(vals in proptest::collection::vec((-10_000i64..10_000, 1i64..500), 0..40)) {
            let cells: Vec<(u64, u32, BigRational)> = vals
                .iter()
                .enumerate()
                .map(|(i, &(p, q))| (i as u64, (i % 5) as u32, BigRational::new(p.into(), q.into())))
                .collect();
            let mut buf = Vec::new();
            write_window(&mut buf, cells.iter().map(|(k, n, v)| (*k, *n, v))).unwrap();
            let back: Vec<(u64, u32, BigRational)> = read_window(buf.as_slice()).unwrap();
            prop_assert_eq!(back, cells);
        }
    }
}
