#pragma once

// nlohmann::json is header-only and heavy; including it once here keeps the
// model/pipeline headers uniform about where it comes from.
#include <json.hpp>
