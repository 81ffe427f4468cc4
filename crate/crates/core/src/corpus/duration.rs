//! ISO-8601 durations as emitted by the video-data service (`PT3M28S`).

/// Parses an ISO-8601 duration into whole seconds.
///
/// Supports the `P[nD]T[nH][nM][nS]` subset plus weeks (`PnW`). Fractional
/// seconds are truncated. Year and month designators are rejected because
/// their length in seconds is ambiguous.
pub fn parse_iso8601_duration(text: &str) -> Option<u64> {
    let rest = text.strip_prefix('P')?;
    if rest.is_empty() {
        return None;
    }
    let mut total: f64 = 0.0;
    let mut in_time = false;
    let mut number = String::new();
    let mut saw_component = false;
    for ch in rest.chars() {
        match ch {
            'T' => {
                if in_time || !number.is_empty() {
                    return None;
                }
                in_time = true;
            }
            '0'..='9' | '.' => number.push(ch),
            unit => {
                if number.is_empty() {
                    return None;
                }
                let value: f64 = number.parse().ok()?;
                number.clear();
                let scale = match (in_time, unit) {
                    (false, 'W') => 7.0 * 86_400.0,
                    (false, 'D') => 86_400.0,
                    (true, 'H') => 3_600.0,
                    (true, 'M') => 60.0,
                    (true, 'S') => 1.0,
                    _ => return None,
                };
                total += value * scale;
                saw_component = true;
            }
        }
    }
    if !number.is_empty() || !saw_component {
        return None;
    }
    Some(total.trunc() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minutes_and_seconds() {
        assert_eq!(parse_iso8601_duration("PT3M28S"), Some(208));
    }

    #[test]
    fn hours_days_weeks() {
        assert_eq!(parse_iso8601_duration("PT1H"), Some(3600));
        assert_eq!(parse_iso8601_duration("P1DT1S"), Some(86_401));
        assert_eq!(parse_iso8601_duration("P1W"), Some(604_800));
        assert_eq!(parse_iso8601_duration("PT0S"), Some(0));
        assert_eq!(parse_iso8601_duration("PT12.7S"), Some(12));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "P", "PT", "3M28S", "PT3X", "P1M", "PT3M28", "PTT1S"] {
            assert_eq!(parse_iso8601_duration(bad), None, "{bad}");
        }
    }
}
