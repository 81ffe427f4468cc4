use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! semantic_types {
    ($($variant:ident => $code:literal, $label:literal;)*) => {
        /// The UMLS semantic types whose terms count as medical.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "lowercase")]
        pub enum SemanticType {
            $($variant,)*
        }

        impl SemanticType {
            pub const ALL: &'static [SemanticType] = &[$(SemanticType::$variant,)*];

            pub fn code(self) -> &'static str {
                match self {
                    $(SemanticType::$variant => $code,)*
                }
            }

            pub fn label(self) -> &'static str {
                match self {
                    $(SemanticType::$variant => $label,)*
                }
            }
        }

        impl FromStr for SemanticType {
            type Err = UnknownSemanticType;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($code => Ok(SemanticType::$variant),)*
                    _ => Err(UnknownSemanticType(s.to_owned())),
                }
            }
        }
    };
}

semantic_types! {
    Topp => "topp", "Therapeutic or Preventive Procedure";
    Dsyn => "dsyn", "Disease or Syndrome";
    Pshu => "pshu", "Pharmacologic Substance";
    Bpoc => "bpoc", "Body Part, Organ, or Organ Component";
    Neop => "neop", "Neoplastic Process";
    Orch => "orch", "Organic Chemical";
    Diap => "diap", "Diagnostic Procedure";
    Hlca => "hlca", "Health Care Activity";
    Chvf => "chvf", "Chemical Viewed Functionally";
    Prog => "prog", "Professional or Occupational Group";
    Chvs => "chvs", "Chemical Viewed Structurally";
    Lbpr => "lbpr", "Laboratory Procedure";
    Blor => "blor", "Body Location or Region";
    Inpo => "inpo", "Injury or Poisoning";
    Mobd => "mobd", "Mental or Behavioral Dysfunction";
    Aapp => "aapp", "Amino Acid, Peptide, or Protein";
    Hcro => "hcro", "Health Care Related Organization";
    Bodm => "bodm", "Biomedical or Dental Material";
    Elii => "elii", "Element, Ion, or Isotope";
    Nnon => "nnon", "Nucleic Acid, Nucleoside, or Nucleotide";
    Hops => "hops", "Hazardous or Poisonous Substance";
    Cgab => "cgab", "Congenital Abnormality";
    Lbtr => "lbtr", "Laboratory or Test Result";
    Bacs => "bacs", "Biologically Active Substance";
    Drdd => "drdd", "Drug Delivery Device";
    Acab => "acab", "Acquired Abnormality";
    Enzy => "enzy", "Enzyme";
    Bdsy => "bdsy", "Body System";
    Antb => "antb", "Antibiotic";
    Horm => "horm", "Hormone";
    Vita => "vita", "Vitamin";
    Clnd => "clnd", "Clinical Drug";
    Chem => "chem", "Chemical";
    Medd => "medd", "Medical Device";
    Resa => "resa", "Research Activity";
    Sosy => "sosy", "Sign or Symptom";
    Inch => "inch", "Inorganic Chemical";
    Patf => "patf", "Pathologic Function";
}

impl fmt::Display for SemanticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSemanticType(pub String);

impl fmt::Display for UnknownSemanticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown semantic type code {:?}", self.0)
    }
}

impl std::error::Error for UnknownSemanticType {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_set() {
        assert_eq!(SemanticType::ALL.len(), 38);
        for t in SemanticType::ALL {
            assert_eq!(t.code().parse::<SemanticType>().unwrap(), *t);
            assert_eq!(t.code().len(), 4);
        }
        assert_eq!("NEOP".parse::<SemanticType>().unwrap(), SemanticType::Neop);
        assert!("qlco".parse::<SemanticType>().is_err());
    }
}
