#include "nng/report.hpp"

namespace nng {

PhaseRecord& RunReport::phase(std::string_view name)
{
    for (auto& p : phases)
        if (p.name == name) return p;
    phases.push_back(PhaseRecord{std::string(name), std::vector<double>(ranks, 0.0), std::vector<double>(ranks, 0.0), 0});
    return phases.back();
}

const PhaseRecord* RunReport::find_phase(std::string_view name) const
{
    for (const auto& p : phases)
        if (p.name == name) return &p;
    return nullptr;
}

}
