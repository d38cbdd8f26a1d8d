# Views Package