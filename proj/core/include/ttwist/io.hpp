#pragma once

#include <istream>
#include <string>

#include <json.hpp>

#include "ttwist/pipeline.hpp"

namespace ttwist {

using Json = nlohmann::ordered_json;

/// Complex file:
///   vertices: a b c
///   simplexes:
///   a b
///   b c
/// one maximal simplex per line, faces added automatically; '#' starts a
/// comment.
OrderedComplex parse_complex(std::istream& in);
OrderedComplex load_complex(const std::string& path);

/// Representation file:
///   dim 2
///   gen (a c) := 1 1 ; 0 1
/// `gen e` sets ρ on the generator carried by the non-tree edge e of the
/// default presentation (base = first vertex); the d×d entries are read row
/// by row, on the same line or the following ones (';' is ignored).
/// `edge e := ...` lines instead give a flat connection on arbitrary edges
/// (identity elsewhere); the two forms cannot be mixed.
Representation parse_representation(std::istream& in, const OrderedComplex& k, const Pi1Presentation& pi);
Representation load_representation(const std::string& path, const OrderedComplex& k, const Pi1Presentation& pi);

/// Cocycle file: lines `(a b c d) = 3/2`; the degree is read off the tuple,
/// unsorted tuples pick up the sign of the sorting permutation.
Theta parse_cocycle(std::istream& in, const OrderedComplex& k);
Theta load_cocycle(const std::string& path, const OrderedComplex& k);

/// Bases file (JSON): {"untwisted": {"0": [[..], ..], ..}, "even": [[..]],
/// "odd": [[..]]}, vectors of rationals written as strings.
struct BasesInput {
  std::optional<CohomologyBases> untwisted;
  std::optional<Z2Bases> twisted;
};
BasesInput parse_bases(const Json& j, const OrderedComplex& k, const Representation& rho);
BasesInput load_bases(const std::string& path, const OrderedComplex& k, const Representation& rho);

Json to_json(const Rational& r);
Json to_json(const Vector& v);
/// List of columns.
Json columns_json(const Matrix& m);
Json to_json(const DetElement& d);
Json to_json(const BasedComplex& c);
Json to_json(const TorsionResult& t);
Json to_json(const StabilizationReport& r);
Json to_json(const std::vector<SpectralPage>& pages, bool with_differentials);
Json to_json(const SubdivisionReport& r);

std::string cochain_label(const OrderedComplex& k, int degree, const Vector& v);

}  // namespace ttwist
