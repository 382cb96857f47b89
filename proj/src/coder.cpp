#include "weld/coder.hpp"

#include "weld/error.hpp"

namespace weld {

std::string coder_kind_name(CoderKind k) {
    return k == CoderKind::neural ? "ff" : "pca";
}

CoderKind parse_coder_kind(const std::string& name) {
    if (name == "ff" || name == "neural") return CoderKind::neural;
    if (name == "pca") return CoderKind::pca;
    throw UsageError("unknown coder kind '" + name + "' (valid: ff, pca)");
}

}  // namespace weld
