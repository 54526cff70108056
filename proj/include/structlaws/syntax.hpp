#pragma once

// S-expression surface syntax for signatures and terms.

#include <string>
#include <string_view>

#include "structlaws/kernel.hpp"
#include "structlaws/sexp.hpp"

namespace structlaws {

Signature parse_signature(const Sexp& form, const std::string& source = "<input>");
Signature parse_signature(std::string_view text, const std::string& source = "<input>");
Sexp signature_to_sexp(const Signature& sig);
std::string print_signature(const Signature& sig);

// Helpers shared by the law and equation parsers.
SortExpr parse_sort_expr(const Signature& sig, const Sexp& s, const std::string& source,
                         const std::vector<std::string>* nat_names = nullptr);
Sexp sort_expr_to_sexp(const Signature& sig, const SortExpr& e,
                       const std::vector<std::string>* nat_names = nullptr);
NatExpr parse_nat_expr(const Sexp& s, const std::string& source,
                       const std::vector<std::string>* nat_names = nullptr);
Sexp nat_expr_to_sexp(const NatExpr& e, const std::vector<std::string>* nat_names = nullptr);
std::string sort_name(const Signature& sig, const Sort& s);

// Terms: `(var k i)`, `(op NAME nat* child*)`,
// `(aux NAME (nat*) MAIN (param*))` (the bare form `(aux NAME nat* MAIN param*)`
// is also accepted). Parameters: a term, `(env t*)`, `(senv (t*) k)`,
// `(sren (n*) k)`, `(vref KIND i)`.
TermPtr parse_term(const Signature& sig, const AuxTable* aux, const Sexp& s,
                   const std::string& source = "<input>");
TermPtr parse_term(const Signature& sig, const AuxTable* aux, std::string_view text,
                   const std::string& source = "<input>");
AuxArg parse_aux_arg(const Signature& sig, const AuxTable* aux, const ParamSpec& spec,
                     const Sexp& s, const std::string& source = "<input>");

Sexp term_to_sexp(const Signature& sig, const AuxTable* aux, const Term& t);
Sexp arg_to_sexp(const Signature& sig, const AuxTable* aux, const AuxArg& a);
std::string print_term(const Signature& sig, const AuxTable* aux, const Term& t);
std::string print_arg(const Signature& sig, const AuxTable* aux, const AuxArg& a);

}  // namespace structlaws
