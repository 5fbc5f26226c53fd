#pragma once

#include "pcsilab/auditor.hpp"
#include "pcsilab/capacity.hpp"
#include "pcsilab/extension.hpp"
#include "pcsilab/gf.hpp"
#include "pcsilab/linalg.hpp"
#include "pcsilab/model.hpp"
#include "pcsilab/rational.hpp"
#include "pcsilab/report.hpp"
#include "pcsilab/rng.hpp"
#include "pcsilab/scheme.hpp"
#include "pcsilab/schemes/f3.hpp"
#include "pcsilab/schemes/generic.hpp"
#include "pcsilab/schemes/grs.hpp"
#include "pcsilab/schemes/halfdl.hpp"
#include "pcsilab/schemes/ia.hpp"
#include "pcsilab/schemes/mk.hpp"
#include "pcsilab/schemes/negative_control.hpp"
#include "pcsilab/schemes/twostep.hpp"
#include "pcsilab/stats.hpp"
#include "pcsilab/tower.hpp"
