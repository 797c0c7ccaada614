#pragma once

// Named catalog sources, as accepted on the command line.

#include <string>
#include <vector>

#include "rectent/sources.hpp"

namespace rectent {

/// Builds a source from a catalog string:
///   circle:uniform, circle:vonmises:<kappa>, wishart1:normal:<m>,
///   embed:normal:<m>:<M>, gauss2:<rho>, discrete:<p1>,<p2>,...,
///   product:<a>x<b>.
/// Throws CatalogError for anything else.
RectifiableSource source_by_name(const std::string& spec);

/// Family prefixes understood by source_by_name.
const std::vector<std::string>& catalog_families();

}  // namespace rectent
