#pragma once

#define ORDQ_VERSION "0.1.0"
