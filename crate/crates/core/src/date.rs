//! Strict ISO-8601 calendar dates (`YYYY-MM-DD`, no timezone).

use chrono::NaiveDate;

/// Parses exactly `YYYY-MM-DD` with a valid calendar day.
pub fn parse_date(s: &str) -> Option<NaiveDate> {
    let b = s.as_bytes();
    let shape_ok = b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter()
            .enumerate()
            .all(|(i, c)| i == 4 || i == 7 || c.is_ascii_digit());
    if !shape_ok {
        return None;
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()
}

pub fn format_date(d: NaiveDate) -> String {
    d.format("%Y-%m-%d").to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_shape() {
        assert!(parse_date("2018-03-01").is_some());
        assert!(parse_date("2020-02-29").is_some());
        assert!(parse_date("2019-02-29").is_none());
        assert!(parse_date("2018-3-1").is_none());
        assert!(parse_date("2018-03-01Z").is_none());
        assert!(parse_date("01/03/2018").is_none());
        assert!(parse_date("").is_none());
    }

    #[test]
    fn format_is_zero_padded() {
        let d = NaiveDate::from_ymd_opt(987, 1, 2).unwrap();
        assert_eq!(format_date(d), "0987-01-02");
    }
}
