#pragma once

#include "vcd/profiles.hpp"

#include <json.hpp>

namespace vcd::profiles {

using Json = nlohmann::json;

auto to_json(const Profile& p) -> Json;
auto to_json(const RProfile& p) -> Json;
auto to_json(const Shadow& s) -> Json;
auto to_json(const Shape& s) -> Json;

auto ramp_json(const Ramp& r) -> Json;
auto ramp_from_json(const Json& j) -> Ramp;

auto profile_from_json(const Json& j) -> Profile;
auto rprofile_from_json(const Json& j) -> RProfile;
auto shadow_from_json(const Json& j) -> Shadow;
/// Parses {"shadow", "f_plus", "f_minus"}; the profile family follows the shadow.
auto shape_from_json(const Json& j) -> Shape;

}  // namespace vcd::profiles
