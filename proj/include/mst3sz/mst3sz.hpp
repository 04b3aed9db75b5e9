#pragma once

#include "mst3sz/attacks.hpp"
#include "mst3sz/codec.hpp"
#include "mst3sz/common.hpp"
#include "mst3sz/field.hpp"
#include "mst3sz/group.hpp"
#include "mst3sz/logsig.hpp"
#include "mst3sz/scheme.hpp"
#include "mst3sz/selftest.hpp"
