#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fairadapt/model/types.hpp"

namespace fairadapt::model {

/// A violated load invariant. `subject` is a declaration key in the same
/// "<kind>:<id>" form as ModelBundle::spans.
struct Issue {
  std::string code;
  std::string message;
  std::string subject;
};

/// Consistency checks that need the whole bundle: forest shape, leaf
/// operationalisation and OFR resource sets. Reference resolution is done
/// by the parser. Issues are sorted by subject then code.
std::vector<Issue> check_invariants(const ModelBundle& bundle);

/// Adds the declarations of `fragment` to `base`. When `parent` is non-empty
/// the fragment's root requirements become trailing children of that node.
/// The result is not validated.
ModelBundle inject(const ModelBundle& base, const ModelBundle& fragment, std::string_view parent);

/// Removes a requirement subtree together with its OFRs and operations and
/// detaches it from its parent. The result is not validated.
ModelBundle retire(const ModelBundle& base, std::string_view requirement);

}  // namespace fairadapt::model
