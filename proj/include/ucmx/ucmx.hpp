// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ucmx/customization.hpp"
#include "ucmx/emit_msc.hpp"
#include "ucmx/emit_sd.hpp"
#include "ucmx/emit_ttcn.hpp"
#include "ucmx/error.hpp"
#include "ucmx/guard.hpp"
#include "ucmx/invariants.hpp"
#include "ucmx/labels.hpp"
#include "ucmx/model.hpp"
#include "ucmx/msc_reader.hpp"
#include "ucmx/order.hpp"
#include "ucmx/pipeline.hpp"
#include "ucmx/synthesis.hpp"
#include "ucmx/traversal.hpp"
#include "ucmx/ttcn_check.hpp"
#include "ucmx/ucm.hpp"
#include "ucmx/xml.hpp"
#include "ucmx/xml_io.hpp"
