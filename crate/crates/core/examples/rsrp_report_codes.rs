//! LTE RSRP report-code mapping in both directions.

use propkit::measurements::{dequantize_rsrp, quantize_rsrp};

fn main() -> propkit::Result<()> {
    for rsrp in [-150.0, -140.0, -139.5, -109.0, -87.3, -44.5, -44.0, -30.0] {
        let code = quantize_rsrp(rsrp)?;
        let iv = dequantize_rsrp(code);
        let lo = iv.lower.map_or("-inf".to_string(), |v| v.to_string());
        let hi = iv.upper.map_or("+inf".to_string(), |v| v.to_string());
        println!("{rsrp:>7} dBm -> {code}  [{lo}, {hi})");
    }
    Ok(())
}
