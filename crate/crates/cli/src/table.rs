//! Plain-text renderings shared by the subcommands.

/// Left-aligned columns separated by two spaces.
pub fn pretty(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells.zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", parts.join("  ").trim_end())
    };
    let mut out = line(&mut header.iter().copied());
    for r in rows {
        out.push_str(&line(&mut r.iter().map(String::as_str)));
    }
    out
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Fixed 15 significant digits so repeated runs print identical bytes.
pub fn real(x: f64) -> String {
    jackstein::io::json_real(x).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pretty_aligns() {
        let t = pretty(&["a", "bb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    bb\nxyz  1\n");
    }

    #[test]
    fn csv_quotes_partitions() {
        let t = csv(&["partition"], &[vec!["[2,1]".into()]]);
        assert_eq!(t, "partition\n\"[2,1]\"\n");
    }
}
