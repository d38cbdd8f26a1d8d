# MBS Checker Application