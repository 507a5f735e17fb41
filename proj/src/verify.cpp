namespace eaplab {}
